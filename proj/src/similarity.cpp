#include "entprof/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace entprof {

double numeric_similarity(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 1.0;
    return std::clamp(1.0 - std::fabs(a - b) / scale, 0.0, 1.0);
}

namespace {

void decode_utf8(std::string_view s, std::vector<char32_t>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
        bool ok = len > 0 && i + len <= s.size();
        char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) ok = false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            // invalid sequence: one unit per byte, tagged out of the code point range
            out.push_back(0x110000u + c);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
}

}  // namespace

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    thread_local std::vector<char32_t> ua, ub;
    thread_local std::vector<std::size_t> row;
    decode_utf8(a, ua);
    decode_utf8(b, ub);
    if (ua.size() < ub.size()) std::swap(ua, ub);
    const std::size_t m = ub.size();
    row.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) row[j] = j;
    for (std::size_t i = 1; i <= ua.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t up = row[j];
            const std::size_t cost = ua[i - 1] == ub[j - 1] ? 0 : 1;
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + cost});
            diag = up;
        }
    }
    return row[m];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
    thread_local std::vector<char32_t> buf;
    decode_utf8(a, buf);
    const std::size_t la = buf.size();
    decode_utf8(b, buf);
    const std::size_t lb = buf.size();
    const std::size_t longest = std::max(la, lb);
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

std::optional<double> embedding_similarity(std::string_view a, std::string_view b, const EmbeddingStore& store) {
    return store.similarity(a, b);
}

PairTable& PairTable::set(std::string a, std::string b, double value) {
    if (b < a) std::swap(a, b);
    table_.insert_or_assign({std::move(a), std::move(b)}, value);
    return *this;
}

std::optional<double> PairTable::operator()(std::string_view a, std::string_view b) const {
    if (b < a) std::swap(a, b);
    auto it = table_.find(std::pair<std::string, std::string>(a, b));
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

Similarity::Similarity(SimilarityConfig config, std::shared_ptr<const EmbeddingStore> store)
    : config_(config), store_(std::move(store)) {
    if (!(config_.missing_pair_similarity > 0.0 && config_.missing_pair_similarity <= 0.001)) {
        throw Error("missing_pair_similarity must lie in (0, 0.001]");
    }
}

double Similarity::text(std::string_view a, std::string_view b) const {
    if (override_) {
        if (auto v = override_(a, b)) return std::clamp(*v, 0.0, 1.0);
    }
    if (config_.use_embeddings && store_) {
        if (auto c = store_->similarity(a, b)) return std::max(*c, 0.0);
    }
    return levenshtein_similarity(a, b);
}

double Similarity::attribute(const AttributeValue& a, const AttributeValue& b, double missing_value) const {
    if (a.is_missing() || b.is_missing()) return missing_value;
    if (a.is_number() && b.is_number()) return numeric_similarity(a.as_number(), b.as_number());
    if (a.is_text() && b.is_text()) return text(a.as_text(), b.as_text());
    return 0.0;
}

double Similarity::tuples(const Tuple& a, const Tuple& b) const {
    if (a.size() != b.size()) throw Error("tuples have different arity");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += attribute(a[i], b[i]);
    return sum;
}

}  // namespace entprof
