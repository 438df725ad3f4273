#include "entprof/embedding.hpp"

#include <algorithm>

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "entprof/io.hpp"

namespace entprof {

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw Error("embedding dimension must be positive");
}

void EmbeddingStore::add(std::string token, std::vector<double> vector) {
    if (vector.size() != dimension_) {
        throw Error("embedding for '" + token + "' has " + std::to_string(vector.size()) +
                    " components, expected " + std::to_string(dimension_));
    }
    for (double x : vector) {
        if (!std::isfinite(x)) throw Error("embedding for '" + token + "' is not finite");
    }
    entries_.insert_or_assign(std::move(token), std::move(vector));
}

const std::vector<double>* EmbeddingStore::find(std::string_view token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingStore::phrase_vector(std::string_view phrase) const {
    const auto tokens = split_whitespace(phrase);
    if (tokens.empty()) return std::nullopt;
    std::vector<double> mean(dimension_, 0.0);
    for (auto t : tokens) {
        const auto* v = find(t);
        if (!v) return std::nullopt;
        for (std::size_t d = 0; d < dimension_; ++d) mean[d] += (*v)[d];
    }
    for (auto& x : mean) x /= static_cast<double>(tokens.size());
    return mean;
}

std::optional<double> EmbeddingStore::similarity(std::string_view a, std::string_view b) const {
    auto va = phrase_vector(a);
    if (!va) return std::nullopt;
    auto vb = phrase_vector(b);
    if (!vb) return std::nullopt;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
        dot += (*va)[d] * (*vb)[d];
        na += (*va)[d] * (*va)[d];
        nb += (*vb)[d] * (*vb)[d];
    }
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

EmbeddingStore EmbeddingStore::parse(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t count = 0, dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!split_whitespace(line).empty()) break;
    }
    {
        std::istringstream head(line);
        if (!(head >> count >> dim) || dim == 0) throw ParseError(origin, line_no, "expected 'count dimension'");
    }
    EmbeddingStore store(dim);
    std::size_t read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_whitespace(line);
        if (fields.empty()) continue;
        if (fields.size() != dim + 1) {
            throw ParseError(origin, line_no,
                             "expected token and " + std::to_string(dim) + " components, found " +
                                 std::to_string(fields.size() - 1) + " components");
        }
        std::vector<double> v(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            if (!parse_number(fields[d + 1], v[d])) {
                throw ParseError(origin, line_no, "bad component '" + std::string(fields[d + 1]) + "'");
            }
        }
        store.add(std::string(fields[0]), std::move(v));
        ++read;
    }
    if (read != count) {
        throw ParseError(origin, 0, "header declares " + std::to_string(count) + " tokens, found " + std::to_string(read));
    }
    return store;
}

EmbeddingStore EmbeddingStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse(in, path);
}

}  // namespace entprof
