#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "entprof/dataset.hpp"

namespace entprof {

// Raised for malformed input files. `line` is the 1-based line in the file (0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// One `name:kind` per line; blank lines and lines starting with '#' are ignored.
Schema load_schema(const std::string& path);
Schema parse_schema(std::istream& in, const std::string& origin = "<schema>");
void write_schema(std::ostream& out, const Schema& schema);

struct RecordSet {
    std::vector<Record> records;
    std::vector<Source> sources;
};

// Columns: record_id, source, optional entity_id, then every schema attribute (any order).
RecordSet load_records(const std::string& path, const Schema& schema);
RecordSet parse_records(std::istream& in, const Schema& schema, const std::string& origin = "<records>");

// Columns: query_id, optional entity_id, then every schema attribute.
std::vector<Query> load_queries(const std::string& path, const Schema& schema);
std::vector<Query> parse_queries(std::istream& in, const Schema& schema, const std::string& origin = "<queries>");

// Columns: query_id then every schema attribute. Missing cells are allowed.
std::map<std::string, Tuple> load_truth(const std::string& path, const Schema& schema);
std::map<std::string, Tuple> parse_truth(std::istream& in, const Schema& schema, const std::string& origin = "<truth>");

// Canonical column order; entity_id columns are written only if any row carries one.
void write_records(std::ostream& out, const Schema& schema, const std::vector<Record>& records);
void write_queries(std::ostream& out, const Schema& schema, const std::vector<Query>& queries);
void write_truth(std::ostream& out, const Schema& schema, const std::map<std::string, Tuple>& truth);

// Entity table used by the query generator: `entity_id,<attrs>`.
struct EntityTruth {
    std::string entity_id;
    Tuple values;

    friend bool operator==(const EntityTruth&, const EntityTruth&) = default;
};
std::vector<EntityTruth> load_entities(const std::string& path, const Schema& schema);
void write_entities(std::ostream& out, const Schema& schema, const std::vector<EntityTruth>& entities);

// Convenience: schema + records + optional queries/truth, validated.
Dataset load_dataset(const std::string& schema_path, const std::string& records_path,
                     const std::string& queries_path = {}, const std::string& truth_path = {});

void write_file(const std::string& path, const std::string& contents);

}  // namespace entprof
