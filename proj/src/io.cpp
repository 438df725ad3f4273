#include "entprof/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "entprof/csv.hpp"

namespace entprof {

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

// Maps header columns onto fixed id columns and schema attributes.
struct Layout {
    std::unordered_map<std::string, std::size_t> ids;  // id column name -> position
    std::vector<std::size_t> attrs;                     // schema index -> position
    std::size_t width = 0;

    std::optional<std::size_t> id(const std::string& name) const {
        auto it = ids.find(name);
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }
};

Layout map_header(const csv::Row& header, const Schema& schema, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& origin) {
    Layout layout;
    layout.width = header.size();
    layout.attrs.assign(schema.size(), static_cast<std::size_t>(-1));
    std::unordered_set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (!seen.insert(name).second) throw ParseError(origin, 1, "duplicate column '" + name + "'");
        bool is_id = false;
        for (const auto* list : {&required, &optional}) {
            for (const auto& id : *list) {
                if (id == name) {
                    layout.ids.emplace(name, c);
                    is_id = true;
                }
            }
        }
        if (is_id) continue;
        auto idx = schema.index_of(name);
        if (!idx) throw ParseError(origin, 1, "unexpected column '" + name + "'");
        layout.attrs[*idx] = c;
    }
    for (const auto& id : required) {
        if (!layout.ids.count(id)) throw ParseError(origin, 1, "missing column '" + id + "'");
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (layout.attrs[i] == static_cast<std::size_t>(-1)) {
            throw ParseError(origin, 1, "missing column '" + schema[i].name + "'");
        }
    }
    return layout;
}

Tuple parse_tuple(const csv::Row& row, const Layout& layout, const Schema& schema, const std::string& origin,
                  std::size_t line) {
    Tuple values;
    values.reserve(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
        try {
            values.push_back(parse_cell(row[layout.attrs[i]], schema.kind(i)));
        } catch (const Error& e) {
            throw ParseError(origin, line, "column " + schema[i].name + ": " + e.what());
        }
    }
    return values;
}

csv::Table read_checked(std::istream& in, const std::string& origin) {
    try {
        return csv::read(in);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(origin, 0, e.what());
    }
}

void check_arity(const csv::Row& row, const Layout& layout, const std::string& origin, std::size_t line) {
    if (row.size() != layout.width) {
        throw ParseError(origin, line,
                         "expected " + std::to_string(layout.width) + " cells, found " + std::to_string(row.size()));
    }
}

std::optional<std::string> optional_cell(const csv::Row& row, const Layout& layout, const std::string& column) {
    auto pos = layout.id(column);
    if (!pos || row[*pos].empty()) return std::nullopt;
    return row[*pos];
}

csv::Row tuple_cells(const Tuple& values) {
    csv::Row out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.to_cell());
    return out;
}

}  // namespace

Schema parse_schema(std::istream& in, const std::string& origin) {
    std::vector<Attribute> attrs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto colon = t.rfind(':');
        if (colon == std::string::npos) throw ParseError(origin, line_no, "expected name:kind");
        Attribute a;
        a.name = trim(std::string_view(t).substr(0, colon));
        try {
            a.kind = parse_attribute_kind(trim(std::string_view(t).substr(colon + 1)));
        } catch (const Error& e) {
            throw ParseError(origin, line_no, e.what());
        }
        attrs.push_back(std::move(a));
    }
    try {
        return Schema(std::move(attrs));
    } catch (const Error& e) {
        throw ParseError(origin, 0, e.what());
    }
}

Schema load_schema(const std::string& path) {
    auto in = open_in(path);
    return parse_schema(in, path);
}

void write_schema(std::ostream& out, const Schema& schema) {
    for (const auto& a : schema.attributes()) out << a.name << ':' << to_string(a.kind) << '\n';
}

RecordSet parse_records(std::istream& in, const Schema& schema, const std::string& origin) {
    const auto table = read_checked(in, origin);
    RecordSet set;
    if (table.header.empty()) throw ParseError(origin, 1, "missing header row");
    const auto layout = map_header(table.header, schema, {"record_id", "source"}, {"entity_id"}, origin);
    std::unordered_set<std::string> ids;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const std::size_t line = table.line_numbers[k];
        check_arity(row, layout, origin, line);
        Record r;
        r.record_id = row[*layout.id("record_id")];
        r.source_id = row[*layout.id("source")];
        if (r.record_id.empty()) throw ParseError(origin, line, "empty record_id");
        if (r.source_id.empty()) throw ParseError(origin, line, "empty source");
        if (!ids.insert(r.record_id).second) {
            throw ValidationError(origin + ":" + std::to_string(line) + ": duplicate record_id '" + r.record_id + "'");
        }
        r.entity_id = optional_cell(row, layout, "entity_id");
        r.values = parse_tuple(row, layout, schema, origin, line);
        set.records.push_back(std::move(r));
    }
    set.sources = group_sources(set.records);
    return set;
}

RecordSet load_records(const std::string& path, const Schema& schema) {
    auto in = open_in(path);
    return parse_records(in, schema, path);
}

std::vector<Query> parse_queries(std::istream& in, const Schema& schema, const std::string& origin) {
    const auto table = read_checked(in, origin);
    if (table.header.empty()) throw ParseError(origin, 1, "missing header row");
    const auto layout = map_header(table.header, schema, {"query_id"}, {"entity_id"}, origin);
    std::vector<Query> out;
    std::unordered_set<std::string> ids;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const std::size_t line = table.line_numbers[k];
        check_arity(row, layout, origin, line);
        Query q;
        q.query_id = row[*layout.id("query_id")];
        if (q.query_id.empty()) throw ParseError(origin, line, "empty query_id");
        if (!ids.insert(q.query_id).second) {
            throw ValidationError(origin + ":" + std::to_string(line) + ": duplicate query_id '" + q.query_id + "'");
        }
        q.entity_id = optional_cell(row, layout, "entity_id");
        q.values = parse_tuple(row, layout, schema, origin, line);
        if (q.missing_count() == q.values.size()) {
            throw ValidationError(origin + ":" + std::to_string(line) + ": query '" + q.query_id +
                                  "' has no filled attribute");
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<Query> load_queries(const std::string& path, const Schema& schema) {
    auto in = open_in(path);
    return parse_queries(in, schema, path);
}

std::map<std::string, Tuple> parse_truth(std::istream& in, const Schema& schema, const std::string& origin) {
    const auto table = read_checked(in, origin);
    if (table.header.empty()) throw ParseError(origin, 1, "missing header row");
    const auto layout = map_header(table.header, schema, {"query_id"}, {}, origin);
    std::map<std::string, Tuple> out;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const std::size_t line = table.line_numbers[k];
        check_arity(row, layout, origin, line);
        const std::string qid = row[*layout.id("query_id")];
        if (qid.empty()) throw ParseError(origin, line, "empty query_id");
        auto values = parse_tuple(row, layout, schema, origin, line);
        if (!out.emplace(qid, std::move(values)).second) {
            throw ValidationError(origin + ":" + std::to_string(line) + ": duplicate truth row for '" + qid + "'");
        }
    }
    return out;
}

std::map<std::string, Tuple> load_truth(const std::string& path, const Schema& schema) {
    auto in = open_in(path);
    return parse_truth(in, schema, path);
}

void write_records(std::ostream& out, const Schema& schema, const std::vector<Record>& records) {
    bool with_entity = false;
    for (const auto& r : records) with_entity |= r.entity_id.has_value();
    csv::Row header{"record_id", "source"};
    if (with_entity) header.push_back("entity_id");
    for (const auto& n : schema.names()) header.push_back(n);
    csv::write_row(out, header);
    for (const auto& r : records) {
        csv::Row row{r.record_id, r.source_id};
        if (with_entity) row.push_back(r.entity_id.value_or(""));
        for (auto& c : tuple_cells(r.values)) row.push_back(std::move(c));
        csv::write_row(out, row);
    }
}

void write_queries(std::ostream& out, const Schema& schema, const std::vector<Query>& queries) {
    bool with_entity = false;
    for (const auto& q : queries) with_entity |= q.entity_id.has_value();
    csv::Row header{"query_id"};
    if (with_entity) header.push_back("entity_id");
    for (const auto& n : schema.names()) header.push_back(n);
    csv::write_row(out, header);
    for (const auto& q : queries) {
        csv::Row row{q.query_id};
        if (with_entity) row.push_back(q.entity_id.value_or(""));
        for (auto& c : tuple_cells(q.values)) row.push_back(std::move(c));
        csv::write_row(out, row);
    }
}

void write_truth(std::ostream& out, const Schema& schema, const std::map<std::string, Tuple>& truth) {
    csv::Row header{"query_id"};
    for (const auto& n : schema.names()) header.push_back(n);
    csv::write_row(out, header);
    for (const auto& [qid, values] : truth) {
        csv::Row row{qid};
        for (auto& c : tuple_cells(values)) row.push_back(std::move(c));
        csv::write_row(out, row);
    }
}

std::vector<EntityTruth> load_entities(const std::string& path, const Schema& schema) {
    auto in = open_in(path);
    const auto table = read_checked(in, path);
    if (table.header.empty()) throw ParseError(path, 1, "missing header row");
    const auto layout = map_header(table.header, schema, {"entity_id"}, {}, path);
    std::vector<EntityTruth> out;
    std::unordered_set<std::string> ids;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const std::size_t line = table.line_numbers[k];
        check_arity(row, layout, path, line);
        EntityTruth e;
        e.entity_id = row[*layout.id("entity_id")];
        if (e.entity_id.empty()) throw ParseError(path, line, "empty entity_id");
        if (!ids.insert(e.entity_id).second) {
            throw ValidationError(path + ":" + std::to_string(line) + ": duplicate entity_id '" + e.entity_id + "'");
        }
        e.values = parse_tuple(row, layout, schema, path, line);
        out.push_back(std::move(e));
    }
    return out;
}

void write_entities(std::ostream& out, const Schema& schema, const std::vector<EntityTruth>& entities) {
    csv::Row header{"entity_id"};
    for (const auto& n : schema.names()) header.push_back(n);
    csv::write_row(out, header);
    for (const auto& e : entities) {
        csv::Row row{e.entity_id};
        for (auto& c : tuple_cells(e.values)) row.push_back(std::move(c));
        csv::write_row(out, row);
    }
}

Dataset load_dataset(const std::string& schema_path, const std::string& records_path,
                     const std::string& queries_path, const std::string& truth_path) {
    Dataset d;
    d.schema = load_schema(schema_path);
    auto set = load_records(records_path, d.schema);
    d.records = std::move(set.records);
    d.sources = std::move(set.sources);
    if (!queries_path.empty()) d.queries = load_queries(queries_path, d.schema);
    if (!truth_path.empty()) d.truth = load_truth(truth_path, d.schema);
    return d;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace entprof
