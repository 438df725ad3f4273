#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "entprof/dataset.hpp"
#include "entprof/embedding.hpp"

namespace entprof {

// 1 - |a-b| / max(|a|,|b|), clamped to [0,1]; 1 when both are zero.
double numeric_similarity(double a, double b);

// Edit distance over Unicode code points (UTF-8 input; invalid bytes count as single units).
std::size_t levenshtein_distance(std::string_view a, std::string_view b);
// 1 - distance / max(length); 1 when both are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

// Cosine of mean token vectors, or nullopt if any token is out of vocabulary.
std::optional<double> embedding_similarity(std::string_view a, std::string_view b, const EmbeddingStore& store);

struct SimilarityConfig {
    double missing_pair_similarity = 0.0001;
    // When false, text always goes through edit distance even if a store is attached.
    bool use_embeddings = true;
};

// Overrides text similarity for specific pairs. Returning nullopt defers to the normal path.
using TextOverride = std::function<std::optional<double>(std::string_view, std::string_view)>;

// Symmetric lookup table of fixed text-pair similarities.
class PairTable {
public:
    PairTable& set(std::string a, std::string b, double value);
    std::optional<double> operator()(std::string_view a, std::string_view b) const;

private:
    std::map<std::pair<std::string, std::string>, double, std::less<>> table_;
};

// Attribute, record and query-record similarity (all pure, thread-safe).
class Similarity {
public:
    explicit Similarity(SimilarityConfig config = {}, std::shared_ptr<const EmbeddingStore> store = nullptr);

    const SimilarityConfig& config() const { return config_; }
    const EmbeddingStore* store() const { return store_.get(); }

    void set_text_override(TextOverride fn) { override_ = std::move(fn); }

    // In [0,1]: override, then embeddings (negative cosine clamps to 0), then edit distance.
    double text(std::string_view a, std::string_view b) const;

    // Both present: kind-specific similarity. Either missing: `missing_value`.
    double attribute(const AttributeValue& a, const AttributeValue& b, double missing_value) const;
    double attribute(const AttributeValue& a, const AttributeValue& b) const {
        return attribute(a, b, config_.missing_pair_similarity);
    }

    // Sum of per-attribute similarities (range [0, A]).
    double tuples(const Tuple& a, const Tuple& b) const;
    double records(const Record& a, const Record& b) const { return tuples(a.values, b.values); }
    double query_record(const Query& q, const Record& r) const { return tuples(q.values, r.values); }

private:
    SimilarityConfig config_;
    std::shared_ptr<const EmbeddingStore> store_;
    TextOverride override_;
};

}  // namespace entprof
