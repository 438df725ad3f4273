#include "entprof/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace entprof {

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
    std::unordered_set<std::string> seen;
    for (const auto& a : attributes_) {
        if (a.name.empty()) throw Error("schema attribute names must be non-empty");
        if (!seen.insert(a.name).second) throw Error("duplicate schema attribute '" + a.name + "'");
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> Schema::names() const {
    std::vector<std::string> out;
    out.reserve(attributes_.size());
    for (const auto& a : attributes_) out.push_back(a.name);
    return out;
}

std::size_t Query::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const auto& v) { return v.is_missing(); }));
}

std::optional<std::size_t> Dataset::source_index(std::string_view source_id) const {
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (sources[i].source_id == source_id) return i;
    }
    return std::nullopt;
}

std::unordered_map<std::string, std::size_t> Dataset::record_index() const {
    std::unordered_map<std::string, std::size_t> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].record_id, i);
    return out;
}

std::vector<std::size_t> Dataset::record_source_indices() const {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < sources.size(); ++i) by_id.emplace(sources[i].source_id, i);
    std::vector<std::size_t> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        auto it = by_id.find(r.source_id);
        if (it == by_id.end()) throw Error("record " + r.record_id + " has unknown source " + r.source_id);
        out.push_back(it->second);
    }
    return out;
}

std::vector<Source> group_sources(const std::vector<Record>& records) {
    std::vector<Source> sources;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& r : records) {
        auto [it, inserted] = slot.emplace(r.source_id, sources.size());
        if (inserted) sources.push_back(Source{r.source_id, {}});
        sources[it->second].record_ids.push_back(r.record_id);
    }
    return sources;
}

namespace {

void check_tuple(const Schema& schema, const Tuple& values, const std::string& owner,
                 std::vector<Violation>& out) {
    if (values.size() != schema.size()) {
        out.push_back({owner, "has " + std::to_string(values.size()) + " values, schema has " +
                                  std::to_string(schema.size())});
        return;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = values[i];
        const std::string where = owner + ", column " + schema[i].name;
        if (!v.matches(schema.kind(i))) {
            out.push_back({where, "value '" + v.to_cell() + "' does not match kind " +
                                      std::string(to_string(schema.kind(i)))});
        } else if (v.is_number() && !std::isfinite(v.as_number())) {
            out.push_back({where, "numeric value is not finite"});
        } else if (v.is_text() && v.as_text().empty()) {
            out.push_back({where, "empty text must be represented as missing"});
        }
    }
}

}  // namespace

std::vector<Violation> validate(const Dataset& d) {
    std::vector<Violation> out;

    std::set<std::string> names;
    for (const auto& a : d.schema.attributes()) {
        if (a.name.empty()) out.push_back({"schema", "empty attribute name"});
        if (!names.insert(a.name).second) out.push_back({"schema", "duplicate attribute " + a.name});
    }

    std::unordered_map<std::string, std::size_t> record_ids;  // id -> owning source count
    std::unordered_map<std::string, const Record*> by_id;
    for (const auto& r : d.records) {
        const std::string owner = "record " + r.record_id;
        if (r.record_id.empty()) out.push_back({owner, "empty record id"});
        if (!record_ids.emplace(r.record_id, 0).second) out.push_back({owner, "duplicate record id"});
        by_id.emplace(r.record_id, &r);
        if (!d.source_index(r.source_id)) out.push_back({owner, "unknown source '" + r.source_id + "'"});
        check_tuple(d.schema, r.values, owner, out);
    }

    std::set<std::string> source_ids;
    for (const auto& s : d.sources) {
        const std::string owner = "source " + s.source_id;
        if (!source_ids.insert(s.source_id).second) out.push_back({owner, "duplicate source id"});
        if (s.record_ids.empty()) out.push_back({owner, "has no records"});
        for (const auto& rid : s.record_ids) {
            auto it = record_ids.find(rid);
            if (it == record_ids.end()) {
                out.push_back({owner, "lists unknown record '" + rid + "'"});
                continue;
            }
            ++it->second;
            const Record* rec = by_id.at(rid);
            if (rec->source_id != s.source_id) {
                out.push_back({owner, "lists record '" + rid + "' published by " + rec->source_id});
            }
        }
    }
    for (const auto& r : d.records) {
        if (by_id.at(r.record_id) != &r || !d.source_index(r.source_id)) continue;  // already reported
        const std::size_t count = record_ids.at(r.record_id);
        if (count != 1) {
            out.push_back({"record " + r.record_id,
                           "belongs to " + std::to_string(count) + " sources, expected 1"});
        }
    }

    std::set<std::string> query_ids;
    for (const auto& q : d.queries) {
        const std::string owner = "query " + q.query_id;
        if (q.query_id.empty()) out.push_back({owner, "empty query id"});
        if (!query_ids.insert(q.query_id).second) out.push_back({owner, "duplicate query id"});
        check_tuple(d.schema, q.values, owner, out);
        if (q.values.size() == d.schema.size() && q.missing_count() == q.values.size()) {
            out.push_back({owner, "has no filled attribute"});
        }
    }

    for (const auto& [qid, values] : d.truth) {
        const std::string owner = "truth " + qid;
        if (!d.queries.empty() && !query_ids.count(qid)) out.push_back({owner, "references unknown query"});
        check_tuple(d.schema, values, owner, out);
    }
    return out;
}

}  // namespace entprof
