#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "entprof/dataset.hpp"
#include "entprof/embedding.hpp"
#include "entprof/io.hpp"

namespace entprof {

// Seeded multi-source benchmark: cricketer-like entities (name, country, matches,
// runs, highest) published by several sources with errors and name ambiguities.
struct SyntheticSpec {
    std::size_t entities = 200;
    std::size_t sources = 4;
    double coverage = 0.75;  // probability a source publishes a given entity
    double error_rate = 0.2;
    double ambiguity_rate = 0.5;
    std::set<std::size_t> clean_sources;  // exempt from errors and ambiguities
    std::size_t filled_count = 3;
    std::uint64_t seed = 1;
};

struct SyntheticBenchmark {
    Dataset dataset;  // records, sources, queries (one per entity) and truth
    std::vector<EntityTruth> entities;
};

Schema synthetic_schema();
SyntheticBenchmark make_synthetic_benchmark(const SyntheticSpec& spec);

// Every token the generator can emit in a text cell before corruption.
std::vector<std::string> synthetic_vocabulary();

// Seeded random unit-scale vectors for `tokens`; a stand-in for a trained embedding model.
EmbeddingStore stub_embeddings(const std::vector<std::string>& tokens, std::size_t dimension, std::uint64_t seed);

}  // namespace entprof
