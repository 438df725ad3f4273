#include "entprof/corrupt.hpp"

#include <cmath>
#include <numeric>

#include "entprof/embedding.hpp"
#include "entprof/rng.hpp"

namespace entprof {

std::size_t corruption_count(double rate, std::size_t eligible) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw Error("corruption rate must lie in [0,1]");
    const double exact = rate * static_cast<double>(eligible);
    return std::min(eligible, static_cast<std::size_t>(std::floor(exact + 1e-9)));
}

namespace {

std::string join(const std::vector<std::string_view>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::size_t first_code_point_length(std::string_view s) {
    if (s.empty()) return 0;
    const auto c = static_cast<unsigned char>(s[0]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    return std::min(len, s.size());
}

double corrupt_number(double x, Rng& rng) {
    const bool integral = std::floor(x) == x;
    const double lo = x == 0.0 ? -1.0 : 0.5 * x;
    const double hi = x == 0.0 ? 1.0 : 1.5 * x;
    for (int attempt = 0; attempt < 32; ++attempt) {
        double y = rng.uniform(lo, hi);
        if (integral) y = std::round(y);
        if (y != x) return y;
    }
    return x + 1.0;
}

std::string corrupt_text(const std::string& original, const std::vector<std::string>& pool, Rng& rng) {
    std::vector<const std::string*> candidates;
    for (const auto& v : pool) {
        if (v != original) candidates.push_back(&v);
    }
    if (candidates.empty()) {
        std::string s = original;
        for (std::size_t i = s.size(); i > 1; --i) std::swap(s[i - 1], s[rng.index(i)]);
        return s != original ? s : original + "*";
    }
    const std::string& donor = *candidates[rng.index(candidates.size())];
    auto tokens = split_whitespace(donor);
    rng.shuffle(tokens);
    std::string permuted = join(tokens);
    return permuted != original ? permuted : donor;
}

}  // namespace

Dataset inject_errors(const Dataset& dataset, const CorruptionPlan& plan) {
    Dataset out = dataset;
    const std::size_t arity = dataset.schema.size();

    std::vector<std::pair<std::size_t, std::size_t>> cells;  // (record, attribute)
    for (std::size_t r = 0; r < dataset.records.size(); ++r)
        for (std::size_t i = 0; i < arity; ++i)
            if (!dataset.records[r].values[i].is_missing()) cells.emplace_back(r, i);

    Rng rng(plan.seed);
    rng.shuffle(cells);
    cells.resize(corruption_count(plan.error_rate, cells.size()));

    for (const auto& [r, i] : cells) {
        const auto& rec = dataset.records[r];
        const auto& v = rec.values[i];
        if (v.is_number()) {
            out.records[r].values[i] = AttributeValue::number(corrupt_number(v.as_number(), rng));
            continue;
        }
        // donors: the same attribute of records describing other entities
        std::vector<std::string> pool;
        for (const auto& other : dataset.records) {
            const auto& ov = other.values[i];
            if (!ov.is_text() || &other == &rec) continue;
            if (rec.entity_id && other.entity_id && *rec.entity_id == *other.entity_id) continue;
            pool.push_back(ov.as_text());
        }
        out.records[r].values[i] = AttributeValue::text(corrupt_text(v.as_text(), pool, rng));
    }
    return out;
}

std::string ambiguate_name(const std::string& name, std::size_t variant) {
    auto tokens = split_whitespace(name);
    if (tokens.empty()) return name;
    if (tokens.size() == 1) variant = 0;
    switch (variant) {
        case 0: {
            std::string first(tokens[0].substr(0, first_code_point_length(tokens[0])));
            first += '.';
            tokens[0] = first;
            return join(tokens);
        }
        case 1:
            tokens.erase(tokens.begin());
            return join(tokens);
        default:
            tokens.pop_back();
            return join(tokens);
    }
}

Dataset inject_ambiguities(const Dataset& dataset, const CorruptionPlan& plan) {
    if (plan.name_attribute >= dataset.schema.size()) throw Error("name attribute out of range");
    Dataset out = dataset;
    std::vector<std::size_t> eligible;
    for (std::size_t r = 0; r < dataset.records.size(); ++r) {
        if (dataset.records[r].values[plan.name_attribute].is_text()) eligible.push_back(r);
    }
    Rng rng(Rng::derive(plan.seed, 1));
    rng.shuffle(eligible);
    eligible.resize(corruption_count(plan.ambiguity_rate, eligible.size()));
    for (auto r : eligible) {
        const std::string& name = dataset.records[r].values[plan.name_attribute].as_text();
        const std::size_t variant = rng.index(3);
        out.records[r].values[plan.name_attribute] = AttributeValue::text(ambiguate_name(name, variant));
    }
    return out;
}

GeneratedQueries make_queries(const std::vector<EntityTruth>& entities, std::size_t arity, std::size_t filled_count,
                              std::uint64_t seed) {
    if (filled_count < 1 || filled_count >= arity) {
        throw Error("filled_count must lie in [1, " + std::to_string(arity - 1) + "]");
    }
    Rng rng(seed);
    GeneratedQueries out;
    for (const auto& e : entities) {
        if (e.values.size() != arity) throw Error("entity '" + e.entity_id + "' does not match the schema");
        std::vector<std::size_t> present;
        for (std::size_t i = 0; i < arity; ++i)
            if (!e.values[i].is_missing()) present.push_back(i);
        if (present.empty()) throw Error("entity '" + e.entity_id + "' has no values");
        rng.shuffle(present);
        present.resize(std::min(present.size(), filled_count));

        Query q;
        q.query_id = e.entity_id;
        q.entity_id = e.entity_id;
        q.values.assign(arity, AttributeValue{});
        for (auto i : present) q.values[i] = e.values[i];
        out.queries.push_back(std::move(q));
        out.truth.emplace(e.entity_id, e.values);
    }
    return out;
}

std::size_t count_modified_cells(const Dataset& a, const Dataset& b) {
    if (a.records.size() != b.records.size()) throw Error("datasets differ in record count");
    std::size_t n = 0;
    for (std::size_t r = 0; r < a.records.size(); ++r) {
        const auto& va = a.records[r].values;
        const auto& vb = b.records[r].values;
        if (va.size() != vb.size()) throw Error("records differ in arity");
        for (std::size_t i = 0; i < va.size(); ++i) n += va[i] == vb[i] ? 0 : 1;
    }
    return n;
}

}  // namespace entprof
