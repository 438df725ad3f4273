#include "entprof/eval.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "entprof/similarity.hpp"

namespace entprof {

PrecisionRecall precision_recall(const std::set<std::string>& truth, const std::set<std::string>& predicted) {
    std::size_t common = 0;
    for (const auto& id : predicted) common += truth.count(id);
    PrecisionRecall pr;
    pr.precision = predicted.empty() ? (truth.empty() ? 1.0 : 0.0)
                                     : static_cast<double>(common) / static_cast<double>(predicted.size());
    pr.recall = truth.empty() ? (predicted.empty() ? 1.0 : 0.0)
                              : static_cast<double>(common) / static_cast<double>(truth.size());
    return pr;
}

double truth_similarity(const AttributeValue& completed, const AttributeValue& truth) {
    if (completed.is_number() && truth.is_number()) return numeric_similarity(completed.as_number(), truth.as_number());
    if (completed.is_text() && truth.is_text()) return levenshtein_similarity(completed.as_text(), truth.as_text());
    return 0.0;
}

double profile_accuracy(const Tuple& completed, const Tuple& truth) {
    if (completed.size() != truth.size()) throw Error("profile and truth differ in arity");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i].is_missing()) continue;
        sum += truth_similarity(completed[i], truth[i]);
        ++n;
    }
    if (n == 0) throw Error("truth tuple has no values");
    return sum / static_cast<double>(n);
}

AccuracyResult accuracy(const std::vector<CompletedProfile>& profiles, const std::map<std::string, Tuple>& truth) {
    if (profiles.empty()) throw Error("accuracy needs at least one profile");
    AccuracyResult out;
    double sum = 0.0;
    for (const auto& p : profiles) {
        auto it = truth.find(p.query_id);
        if (it == truth.end()) throw Error("no truth entry for query '" + p.query_id + "'");
        out.per_query.push_back(profile_accuracy(p.values, it->second));
        sum += out.per_query.back();
    }
    out.mean = sum / static_cast<double>(profiles.size());
    return out;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0)) throw Error("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("paired samples differ in length");
    const std::size_t n = a.size();
    if (n < 2) throw Error("paired t-test needs at least two pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error("paired differences have zero variance");

    TTestResult r;
    r.df = n - 1;
    r.mean_difference = mean;
    r.t_value = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.p_value = student_t_two_sided_p(r.t_value, static_cast<double>(r.df));
    r.effect_size = std::fabs(mean) / sd;
    return r;
}

}  // namespace entprof
