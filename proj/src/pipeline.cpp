#include "entprof/pipeline.hpp"

#include <set>
#include <unordered_map>

#include "entprof/features.hpp"
#include "json.hpp"

namespace entprof {

using json = nlohmann::json;

SourceRatings make_ratings(const SourceSimilarityMatrix& matrix, const RunConfig& config) {
    if (config.biased_source) return source_ratings(matrix, *config.biased_source, config.bias_value);
    return uniform_ratings(matrix.size());
}

RunResult run_pipeline(const Dataset& dataset, const Similarity& sim, const RunConfig& config) {
    RunResult out;
    out.config = config;
    out.matrix = build_source_similarity_matrix(dataset, sim, config.matrix);
    out.trust = trustworthiness_scores(out.matrix);
    out.ratings = make_ratings(out.matrix, config);
    const auto uniform = uniform_ratings(out.matrix.size());

    const auto split = build_training_set(dataset, config.query_split, config.seed, out.trust.trust, sim);
    out.train_queries = split.train_queries.size();
    if (split.test_queries.empty()) throw Error("query split leaves no test queries");

    std::optional<ClassifierModel> model;
    LinkPredicate link = oracle_linker();
    if (!config.oracle) {
        model.emplace(train(config.classifier, split.train, config.hyperparameters, config.seed));
        link = model_linker(*model);
        const auto test_pairs = FeatureMatrix::from(label_pairs(split.test_queries, dataset, out.trust.trust, sim));
        out.classifier = evaluate_classifier(*model, test_pairs);
    }

    for (const auto& q : split.test_queries) {
        if (!q.entity_id) throw Error("query '" + q.query_id + "' has no entity_id annotation");
        const auto associated = resolve(q, dataset, out.trust.trust, sim, link);

        std::set<std::string> truth_set, predicted;
        for (const auto& r : dataset.records) {
            if (r.entity_id && *r.entity_id == *q.entity_id) truth_set.insert(r.record_id);
        }
        for (auto k : associated) predicted.insert(dataset.records[k].record_id);

        auto profile = complete_profile(q, dataset, associated, out.ratings, out.matrix, sim, config.profile);
        const auto baseline = complete_profile(q, dataset, associated, uniform, out.matrix, sim, config.profile);

        auto truth = dataset.truth.find(q.query_id);
        if (truth == dataset.truth.end()) throw Error("no truth entry for query '" + q.query_id + "'");

        QueryOutcome o;
        o.query_id = q.query_id;
        const auto pr = precision_recall(truth_set, predicted);
        o.precision = pr.precision;
        o.recall = pr.recall;
        o.accuracy = profile_accuracy(profile.values, truth->second);
        o.uniform_accuracy = profile_accuracy(baseline.values, truth->second);
        out.per_query.push_back(o);
        out.profiles.push_back(std::move(profile));
    }

    const double n = static_cast<double>(out.per_query.size());
    std::vector<double> acc, acc_uniform;
    for (const auto& o : out.per_query) {
        out.precision += o.precision / n;
        out.recall += o.recall / n;
        out.accuracy += o.accuracy / n;
        out.uniform_accuracy += o.uniform_accuracy / n;
        acc.push_back(o.accuracy);
        acc_uniform.push_back(o.uniform_accuracy);
    }
    if (!config.biased_source) {
        out.ablation_note = "ratings are uniform; no biased run to compare";
    } else {
        try {
            out.ablation_test = paired_t_test(acc, acc_uniform);
        } catch (const Error& e) {
            out.ablation_note = e.what();
        }
    }
    return out;
}

namespace {

json ttest_json(const TTestResult& t) {
    return {{"t_value", t.t_value},
            {"p_value", t.p_value},
            {"effect_size", t.effect_size},
            {"df", t.df},
            {"mean_difference", t.mean_difference}};
}

}  // namespace

std::string report_to_json(const RunResult& r) {
    const auto& c = r.config;
    json doc;
    doc["format"] = "entprof-report/1";
    doc["config"] = {{"classifier", c.oracle ? std::string("oracle") : std::string(to_string(c.classifier))},
                     {"trees", c.hyperparameters.n_trees},
                     {"k", c.hyperparameters.k},
                     {"classifier_split", c.classifier_split},
                     {"query_split", c.query_split},
                     {"biased_source", c.biased_source ? json(*c.biased_source) : json(nullptr)},
                     {"bias_value", c.bias_value},
                     {"uniform_ratings", !c.biased_source},
                     {"keep_query_values", c.profile.keep_query_values},
                     {"seed", c.seed},
                     {"records", c.records_path},
                     {"queries", c.queries_path},
                     {"truth", c.truth_path},
                     {"embeddings", c.embeddings_path},
                     {"schema", c.schema_path}};
    doc["sources"] = {{"order", r.matrix.source_order()},
                      {"row_sums", r.trust.row_sums},
                      {"trust", r.trust.trust},
                      {"most_trustworthy", r.matrix.source_order()[r.trust.mts_index]},
                      {"ratings", r.ratings.ratings},
                      {"index_of_maximum", r.ratings.index_of_maximum}};
    doc["queries"] = {{"train", r.train_queries}, {"test", r.per_query.size()}};
    doc["aggregate"] = {{"precision_percent", 100.0 * r.precision},
                        {"recall_percent", 100.0 * r.recall},
                        {"accuracy_percent", 100.0 * r.accuracy},
                        {"uniform_accuracy_percent", 100.0 * r.uniform_accuracy}};
    if (r.classifier) {
        const auto& m = *r.classifier;
        doc["classifier_metrics"] = {{"kind", to_string(m.kind)},
                                     {"f1", m.f1},
                                     {"roc_auc", m.auc},
                                     {"mcc", m.mcc},
                                     {"tp", m.counts.tp},
                                     {"fp", m.counts.fp},
                                     {"tn", m.counts.tn},
                                     {"fn", m.counts.fn}};
    } else {
        doc["classifier_metrics"] = nullptr;
    }
    json per = json::array();
    for (const auto& o : r.per_query) {
        per.push_back({{"query_id", o.query_id},
                       {"precision", o.precision},
                       {"recall", o.recall},
                       {"accuracy", o.accuracy},
                       {"uniform_accuracy", o.uniform_accuracy}});
    }
    doc["per_query"] = std::move(per);
    if (r.ablation_test) {
        doc["ttest_biased_vs_uniform_accuracy"] = ttest_json(*r.ablation_test);
    } else {
        doc["ttest_biased_vs_uniform_accuracy"] = {{"skipped", r.ablation_note}};
    }
    return doc.dump(1) + "\n";
}

MetricSeries read_report_series(const std::string& text) {
    MetricSeries s;
    try {
        const auto doc = json::parse(text);
        for (const auto& q : doc.at("per_query")) {
            s.query_ids.push_back(q.at("query_id").get<std::string>());
            s.precision.push_back(q.at("precision").get<double>());
            s.recall.push_back(q.at("recall").get<double>());
            s.accuracy.push_back(q.at("accuracy").get<double>());
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
    return s;
}

std::string compare_reports_json(const MetricSeries& a, const MetricSeries& b) {
    std::unordered_map<std::string, std::size_t> in_b;
    for (std::size_t i = 0; i < b.query_ids.size(); ++i) in_b.emplace(b.query_ids[i], i);
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < a.query_ids.size(); ++i) {
        auto it = in_b.find(a.query_ids[i]);
        if (it == in_b.end()) continue;
        ia.push_back(i);
        ib.push_back(it->second);
    }
    json doc;
    doc["format"] = "entprof-ttest/1";
    doc["paired_queries"] = ia.size();
    auto test = [&](const char* name, const std::vector<double>& xa, const std::vector<double>& xb) {
        std::vector<double> pa, pb;
        for (std::size_t k = 0; k < ia.size(); ++k) {
            pa.push_back(xa[ia[k]]);
            pb.push_back(xb[ib[k]]);
        }
        try {
            doc[name] = ttest_json(paired_t_test(pa, pb));
        } catch (const Error& e) {
            doc[name] = {{"skipped", e.what()}};
        }
    };
    test("precision", a.precision, b.precision);
    test("recall", a.recall, b.recall);
    test("accuracy", a.accuracy, b.accuracy);
    return doc.dump(1) + "\n";
}

}  // namespace entprof
