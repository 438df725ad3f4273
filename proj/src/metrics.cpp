#include "entprof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entprof/rng.hpp"

namespace entprof {

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw Error("label lists differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) (predicted[i] ? c.tp : c.fn)++;
        else (predicted[i] ? c.fp : c.tn)++;
    }
    return c;
}

double f1_score(const ConfusionCounts& c) {
    const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(c.tp) / denom;
}

double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
    const double a = tp + fp, b = tp + fn, d = tn + fp, e = tn + fn;
    if (a == 0 || b == 0 || d == 0 || e == 0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(a * b * d * e);
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank sums are accumulated doubled (2 * mid-rank is an integer) to keep the
    // statistic exact for any realistic n.
    double pos_rank2 = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) {
                pos_rank2 += mid2;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw Error("ROC AUC needs both classes");
    const double p = static_cast<double>(n_pos), q = static_cast<double>(n_neg);
    const double u2 = pos_rank2 - p * (p + 1.0);
    return u2 / (2.0 * p * q);
}

double cv_error(ClassifierKind kind, const FeatureMatrix& data, const Hyperparameters& hp, std::size_t folds,
                std::uint64_t seed) {
    const std::size_t n = data.rows();
    if (folds < 2 || folds > n) throw Error("fold count must lie in [2, number of examples]");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    double error_sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t lo = f * n / folds, hi = (f + 1) * n / folds;
        std::vector<std::size_t> train_rows, test_rows;
        train_rows.reserve(n - (hi - lo));
        for (std::size_t i = 0; i < n; ++i) (i >= lo && i < hi ? test_rows : train_rows).push_back(order[i]);
        const auto model = train(kind, data.subset(train_rows), hp, Rng::derive(seed, f));
        std::size_t wrong = 0;
        for (auto r : test_rows) wrong += model.predict(data.row(r)).label != data.y[r] ? 1 : 0;
        error_sum += 100.0 * static_cast<double>(wrong) / static_cast<double>(test_rows.size());
    }
    return error_sum / static_cast<double>(folds);
}

ClassifierMetrics evaluate_classifier(const ClassifierModel& model, const FeatureMatrix& test) {
    ClassifierMetrics m;
    m.kind = model.kind();
    std::vector<double> scores(test.rows());
    std::vector<int> predicted(test.rows());
    for (std::size_t i = 0; i < test.rows(); ++i) {
        const auto p = model.predict(test.row(i));
        scores[i] = p.score;
        predicted[i] = p.label;
    }
    m.counts = confusion(test.y, predicted);
    m.f1 = f1_score(m.counts);
    m.mcc = mcc(m.counts);
    const bool both = m.counts.tp + m.counts.fn > 0 && m.counts.tn + m.counts.fp > 0;
    m.auc = both ? roc_auc(scores, test.y) : 0.0;
    return m;
}

ExampleSplit split_examples(const FeatureMatrix& data, double train_fraction, std::uint64_t seed) {
    const std::size_t n = data.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) throw Error("example split leaves an empty partition");
    return {data.subset(std::span(order).first(n_train)), data.subset(std::span(order).subspan(n_train))};
}

ModelSelection select_model(const FeatureMatrix& data, std::span<const ClassifierKind> kinds, const Hyperparameters& hp,
                            std::uint64_t seed, const SelectionOptions& options) {
    if (kinds.empty()) throw Error("no classifier kinds to select from");
    const auto [train_set, test_set] = split_examples(data, options.train_fraction, seed);

    ModelSelection sel;
    for (auto kind : kinds) {
        const auto model = train(kind, train_set, hp, seed);
        auto m = evaluate_classifier(model, test_set);
        if (options.with_cv) m.cv_error_percent = cv_error(kind, data, hp, options.folds, seed);
        sel.table.push_back(m);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < sel.table.size(); ++i) {
        const auto& a = sel.table[i];
        const auto& b = sel.table[best];
        if (a.f1 > b.f1 || (a.f1 == b.f1 && a.mcc > b.mcc)) best = i;
    }
    sel.best = sel.table[best].kind;
    return sel;
}

}  // namespace entprof
