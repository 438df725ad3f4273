#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "entprof/value.hpp"

namespace entprof {

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Text;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<Attribute> attributes);

    std::size_t size() const { return attributes_.size(); }
    const Attribute& operator[](std::size_t i) const { return attributes_[i]; }
    const std::vector<Attribute>& attributes() const { return attributes_; }
    AttributeKind kind(std::size_t i) const { return attributes_[i].kind; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::string> names() const;

    friend bool operator==(const Schema&, const Schema&) = default;

private:
    std::vector<Attribute> attributes_;
};

using Tuple = std::vector<AttributeValue>;

struct Record {
    std::string record_id;
    std::string source_id;
    Tuple values;
    std::optional<std::string> entity_id;

    friend bool operator==(const Record&, const Record&) = default;
};

struct Query {
    std::string query_id;
    Tuple values;
    std::optional<std::string> entity_id;

    std::size_t missing_count() const;

    friend bool operator==(const Query&, const Query&) = default;
};

struct Source {
    std::string source_id;
    std::vector<std::string> record_ids;

    friend bool operator==(const Source&, const Source&) = default;
};

// Immutable once validated; all other modules only read it.
struct Dataset {
    Schema schema;
    std::vector<Record> records;
    std::vector<Source> sources;  // in order of first appearance in the records file
    std::vector<Query> queries;
    std::map<std::string, Tuple> truth;

    // Index helpers. Linear scans are fine for the sizes this library targets,
    // but callers in hot loops should build their own maps.
    std::optional<std::size_t> source_index(std::string_view source_id) const;
    std::unordered_map<std::string, std::size_t> record_index() const;
    // Source index of every record, aligned with `records`. Throws on unknown source ids.
    std::vector<std::size_t> record_source_indices() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Groups records by source id in order of first appearance.
std::vector<Source> group_sources(const std::vector<Record>& records);

struct Violation {
    std::string where;    // e.g. "record r3, column Runs"
    std::string message;
};

// Returns an empty list iff every structural invariant holds.
std::vector<Violation> validate(const Dataset& dataset);

}  // namespace entprof
