#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entprof/dataset.hpp"
#include "entprof/similarity.hpp"

namespace entprof {

// Layout: [similarity per attribute (A), record presence flag per attribute (A), trust].
// A missing value on either side gives similarity 0.0; the flag is record-side only.
using FeatureVector = std::vector<double>;

inline std::size_t feature_count(std::size_t arity) { return 2 * arity + 1; }

FeatureVector extract_features(const Query& q, const Record& r, double trust, const Similarity& sim);

struct LabeledExample {
    FeatureVector features;
    int label = 0;
    std::string query_id;
    std::string record_id;
};

// Every (query, record) pair, labeled 1 iff the entity annotations agree.
// `trust` is indexed like dataset.sources. Throws if a query lacks entity_id.
std::vector<LabeledExample> label_pairs(const std::vector<Query>& queries, const Dataset& dataset,
                                        const std::vector<double>& trust, const Similarity& sim);

struct QuerySplit {
    std::vector<Query> train;
    std::vector<Query> test;
};

// Seeded shuffle, then the first round(fraction * n) queries train.
QuerySplit split_queries(const std::vector<Query>& queries, double train_fraction, std::uint64_t seed);

struct TrainingSet {
    std::vector<LabeledExample> train;
    std::vector<Query> train_queries;
    std::vector<Query> test_queries;
};

TrainingSet build_training_set(const Dataset& dataset, double train_fraction, std::uint64_t seed,
                               const std::vector<double>& trust, const Similarity& sim);

}  // namespace entprof
