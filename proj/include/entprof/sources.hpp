#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entprof/dataset.hpp"
#include "entprof/similarity.hpp"

namespace entprof {

// cells(i, j) is the mean, over records of source i, of the best normalized
// similarity to any record of source j. Not symmetric in general.
class SourceSimilarityMatrix {
public:
    SourceSimilarityMatrix() = default;
    SourceSimilarityMatrix(std::vector<std::string> source_order, std::vector<double> cells);

    std::size_t size() const { return order_.size(); }
    const std::vector<std::string>& source_order() const { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * order_.size() + j]; }
    std::size_t index_of(std::string_view source_id) const;  // throws on unknown id
    const std::vector<double>& cells() const { return cells_; }

    friend bool operator==(const SourceSimilarityMatrix&, const SourceSimilarityMatrix&) = default;

private:
    std::vector<std::string> order_;
    std::vector<double> cells_;  // row-major
};

struct MatrixOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
};

SourceSimilarityMatrix build_source_similarity_matrix(const Dataset& dataset, const Similarity& sim,
                                                      const MatrixOptions& options = {});

// CSV with a header row and first column of source ids.
void write_matrix(std::ostream& out, const SourceSimilarityMatrix& m);
SourceSimilarityMatrix read_matrix(std::istream& in, const std::string& origin = "<matrix>");

struct TrustReport {
    std::size_t mts_index = 0;      // most trustworthy source
    std::vector<double> row_sums;
    std::vector<double> trust;      // trust[i] = cells(i, mts_index)
};

TrustReport trustworthiness_scores(const SourceSimilarityMatrix& m);

struct SourceRatings {
    std::string biased_source;  // empty for uniform ratings
    double bias_value = 1.0;
    std::vector<double> ratings;
    std::size_t index_of_maximum = 0;
};

SourceRatings source_ratings(const SourceSimilarityMatrix& m, std::string_view biased_source, double bias_value);
SourceRatings uniform_ratings(std::size_t source_count);

// Lowest index among maximal elements.
std::size_t argmax_first(const std::vector<double>& values);

}  // namespace entprof
