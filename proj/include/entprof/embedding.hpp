#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entprof {

// Token -> dense vector lookup, exact case-sensitive match.
//
// Text format: first line `count dimension`, then `token v1 ... vD` per line.
class EmbeddingStore {
public:
    explicit EmbeddingStore(std::size_t dimension = 1);

    static EmbeddingStore load(const std::string& path);
    static EmbeddingStore parse(std::istream& in, const std::string& origin = "<embeddings>");

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void add(std::string token, std::vector<double> vector);
    const std::vector<double>* find(std::string_view token) const;

    // Mean of the token vectors of a whitespace-tokenized phrase, or nullopt if any
    // token is out of vocabulary (or the phrase has no tokens).
    std::optional<std::vector<double>> phrase_vector(std::string_view phrase) const;

    // Cosine of the mean phrase vectors; nullopt when either phrase is not fully
    // covered or either mean vector has zero magnitude.
    std::optional<double> similarity(std::string_view a, std::string_view b) const;

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    std::size_t dimension_;
    std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>> entries_;
};

std::vector<std::string_view> split_whitespace(std::string_view s);

}  // namespace entprof
