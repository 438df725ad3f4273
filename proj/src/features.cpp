#include "entprof/features.hpp"

#include <cmath>

#include "entprof/rng.hpp"

namespace entprof {

FeatureVector extract_features(const Query& q, const Record& r, double trust, const Similarity& sim) {
    const std::size_t a = q.values.size();
    if (r.values.size() != a) throw Error("query and record have different arity");
    FeatureVector f(feature_count(a), 0.0);
    for (std::size_t i = 0; i < a; ++i) {
        f[i] = sim.attribute(q.values[i], r.values[i], 0.0);
        f[a + i] = r.values[i].is_missing() ? 0.0 : 1.0;
    }
    f[2 * a] = trust;
    return f;
}

std::vector<LabeledExample> label_pairs(const std::vector<Query>& queries, const Dataset& dataset,
                                        const std::vector<double>& trust, const Similarity& sim) {
    if (trust.size() != dataset.sources.size()) throw Error("trust vector does not match source count");
    const auto source_of = dataset.record_source_indices();
    std::vector<LabeledExample> out;
    out.reserve(queries.size() * dataset.records.size());
    for (const auto& q : queries) {
        if (!q.entity_id) throw Error("query '" + q.query_id + "' has no entity_id annotation");
        for (std::size_t k = 0; k < dataset.records.size(); ++k) {
            const auto& r = dataset.records[k];
            LabeledExample ex;
            ex.features = extract_features(q, r, trust[source_of[k]], sim);
            ex.label = r.entity_id && *r.entity_id == *q.entity_id ? 1 : 0;
            ex.query_id = q.query_id;
            ex.record_id = r.record_id;
            out.push_back(std::move(ex));
        }
    }
    return out;
}

QuerySplit split_queries(const std::vector<Query>& queries, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) throw Error("split fraction must lie in [0,1]");
    std::vector<std::size_t> order(queries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(queries.size())));
    QuerySplit split;
    for (std::size_t k = 0; k < order.size(); ++k) {
        (k < n_train ? split.train : split.test).push_back(queries[order[k]]);
    }
    return split;
}

TrainingSet build_training_set(const Dataset& dataset, double train_fraction, std::uint64_t seed,
                               const std::vector<double>& trust, const Similarity& sim) {
    for (const auto& q : dataset.queries) {
        if (!q.entity_id) throw Error("query '" + q.query_id + "' has no entity_id annotation");
    }
    auto split = split_queries(dataset.queries, train_fraction, seed);
    TrainingSet set;
    set.train = label_pairs(split.train, dataset, trust, sim);
    set.train_queries = std::move(split.train);
    set.test_queries = std::move(split.test);
    return set;
}

}  // namespace entprof
