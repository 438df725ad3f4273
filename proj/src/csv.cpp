#include "entprof/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "entprof/value.hpp"

namespace entprof::csv {

namespace {

// Reads one logical record, which may span physical lines inside quotes.
bool read_record(std::istream& in, Row& row, std::size_t& line_no) {
    row.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    const std::size_t start_line = line_no;

    std::string cell;
    bool in_quotes = false;
    bool was_quoted = false;
    for (;;) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cell += '"';
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    cell += c;
                }
            } else if (c == '"' && cell.empty() && !was_quoted) {
                in_quotes = true;
                was_quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(cell));
                cell.clear();
                was_quoted = false;
            } else if (c == '\r' && i + 1 == line.size()) {
                // CRLF line ending
            } else {
                cell += c;
            }
        }
        if (!in_quotes) break;
        if (!std::getline(in, line)) {
            throw Error("unterminated quoted field starting on line " + std::to_string(start_line));
        }
        ++line_no;
        cell += '\n';
    }
    row.push_back(std::move(cell));
    return true;
}

bool blank(const Row& row) { return row.size() == 1 && row[0].empty(); }

}  // namespace

Table read(std::istream& in) {
    Table table;
    Row row;
    std::size_t line_no = 0;
    bool have_header = false;
    for (std::size_t start = 1; read_record(in, row, line_no); start = line_no + 1) {
        if (blank(row)) continue;
        if (!have_header) {
            if (!row.empty() && row[0].rfind("\xEF\xBB\xBF", 0) == 0) row[0].erase(0, 3);
            table.header = row;
            have_header = true;
            continue;
        }
        table.rows.push_back(row);
        table.line_numbers.push_back(start);
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return read(in);
}

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << quote(row[i]);
    }
    out << '\n';
}

}  // namespace entprof::csv
