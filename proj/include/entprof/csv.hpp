#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entprof::csv {

using Row = std::vector<std::string>;

// RFC 4180 style: comma separated, double-quote quoting, "" escapes a quote.
// Blank lines are skipped. A trailing CR on a line is ignored.
struct Table {
    Row header;
    std::vector<Row> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

Table read(std::istream& in);
Table read_file(const std::string& path);

void write_row(std::ostream& out, const Row& row);
std::string quote(const std::string& cell);

}  // namespace entprof::csv
