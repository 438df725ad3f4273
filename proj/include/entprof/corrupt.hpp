#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "entprof/dataset.hpp"
#include "entprof/io.hpp"

namespace entprof {

struct CorruptionPlan {
    double error_rate = 0.0;      // fraction of non-missing cells replaced
    double ambiguity_rate = 0.0;  // fraction of records whose name cell is rewritten
    std::uint64_t seed = 0;
    std::size_t name_attribute = 0;
};

// Exactly floor(rate * eligible) items; a tiny epsilon absorbs binary rounding of rate * n.
std::size_t corruption_count(double rate, std::size_t eligible);

// Replaces floor(error_rate * non-missing cells) cells, chosen by seeded shuffle.
// Numbers: uniform in [0.5x, 1.5x] (integers stay integers), never the original.
// Text: another entity's value for the attribute with its tokens permuted, never the original.
Dataset inject_errors(const Dataset& dataset, const CorruptionPlan& plan);

// Rewrites the name cell of floor(ambiguity_rate * eligible records): abbreviate the
// first token, drop the first token, or drop the last token (single tokens only abbreviate).
Dataset inject_ambiguities(const Dataset& dataset, const CorruptionPlan& plan);

// "Sunil Gavaskar" -> "S. Gavaskar" / "Gavaskar" / "Sunil" for variant 0 / 1 / 2.
std::string ambiguate_name(const std::string& name, std::size_t variant);

struct GeneratedQueries {
    std::vector<Query> queries;
    std::map<std::string, Tuple> truth;
};

// One query per entity (query_id = entity_id) with `filled_count` attributes kept.
GeneratedQueries make_queries(const std::vector<EntityTruth>& entities, std::size_t arity, std::size_t filled_count,
                              std::uint64_t seed);

// Number of cells that differ between two datasets with identical record layout.
std::size_t count_modified_cells(const Dataset& a, const Dataset& b);

}  // namespace entprof
