#include "entprof/sources.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "entprof/csv.hpp"
#include "entprof/io.hpp"

namespace entprof {

SourceSimilarityMatrix::SourceSimilarityMatrix(std::vector<std::string> source_order, std::vector<double> cells)
    : order_(std::move(source_order)), cells_(std::move(cells)) {
    if (cells_.size() != order_.size() * order_.size()) throw Error("matrix cell count does not match source count");
}

std::size_t SourceSimilarityMatrix::index_of(std::string_view source_id) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == source_id) return i;
    }
    throw Error("unknown source '" + std::string(source_id) + "'");
}

SourceSimilarityMatrix build_source_similarity_matrix(const Dataset& dataset, const Similarity& sim,
                                                      const MatrixOptions& options) {
    const std::size_t n = dataset.sources.size();
    const double arity = static_cast<double>(dataset.schema.size());
    if (arity == 0) throw Error("schema has no attributes");

    const auto by_id = dataset.record_index();
    std::vector<std::vector<const Record*>> members(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& src = dataset.sources[s];
        if (src.record_ids.empty()) throw Error("source '" + src.source_id + "' has no records");
        for (const auto& rid : src.record_ids) {
            auto it = by_id.find(rid);
            if (it == by_id.end()) throw Error("source '" + src.source_id + "' lists unknown record " + rid);
            members[s].push_back(&dataset.records[it->second]);
        }
    }

    std::vector<double> cells(n * n, 0.0);
    for (std::size_t s = 0; s < n; ++s) cells[s * n + s] = 1.0;

    // Each unordered pair (i, j) shares one block of record similarities: row
    // maxima give cell (i, j), column maxima give cell (j, i).
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    auto fill_pair = [&](std::size_t i, std::size_t j) {
        const auto& a = members[i];
        const auto& b = members[j];
        std::vector<double> col_max(b.size(), 0.0);
        double row_total = 0.0;
        for (const Record* ra : a) {
            double row_max = 0.0;
            for (std::size_t k = 0; k < b.size(); ++k) {
                const double s = sim.records(*ra, *b[k]) / arity;
                row_max = std::max(row_max, s);
                col_max[k] = std::max(col_max[k], s);
            }
            row_total += row_max;
        }
        double col_total = 0.0;
        for (double c : col_max) col_total += c;
        cells[i * n + j] = row_total / static_cast<double>(a.size());
        cells[j * n + i] = col_total / static_cast<double>(b.size());
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, pairs.size()));
    if (threads <= 1) {
        for (auto [i, j] : pairs) fill_pair(i, j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t p; (p = next.fetch_add(1)) < pairs.size();) fill_pair(pairs[p].first, pairs[p].second);
            });
        }
    }

    std::vector<std::string> order;
    order.reserve(n);
    for (const auto& s : dataset.sources) order.push_back(s.source_id);
    return SourceSimilarityMatrix(std::move(order), std::move(cells));
}

void write_matrix(std::ostream& out, const SourceSimilarityMatrix& m) {
    csv::Row header{"source"};
    for (const auto& id : m.source_order()) header.push_back(id);
    csv::write_row(out, header);
    for (std::size_t i = 0; i < m.size(); ++i) {
        csv::Row row{m.source_order()[i]};
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_number(m(i, j)));
        csv::write_row(out, row);
    }
}

SourceSimilarityMatrix read_matrix(std::istream& in, const std::string& origin) {
    const auto table = csv::read(in);
    if (table.header.empty()) throw ParseError(origin, 1, "missing header row");
    const std::size_t n = table.header.size() - 1;
    std::vector<std::string> order(table.header.begin() + 1, table.header.end());
    if (table.rows.size() != n) throw ParseError(origin, 0, "matrix is not square");
    std::vector<double> cells;
    cells.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table.rows[i];
        if (row.size() != n + 1 || row[0] != order[i]) {
            throw ParseError(origin, table.line_numbers[i], "row does not match header order");
        }
        for (std::size_t j = 1; j <= n; ++j) {
            double x = 0.0;
            if (!parse_number(row[j], x)) throw ParseError(origin, table.line_numbers[i], "bad cell '" + row[j] + "'");
            cells.push_back(x);
        }
    }
    return SourceSimilarityMatrix(std::move(order), std::move(cells));
}

std::size_t argmax_first(const std::vector<double>& values) {
    if (values.empty()) throw Error("argmax of an empty list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

TrustReport trustworthiness_scores(const SourceSimilarityMatrix& m) {
    TrustReport report;
    const std::size_t n = m.size();
    if (n == 0) throw Error("empty source similarity matrix");
    report.row_sums.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) report.row_sums[i] += m(i, j);
    report.mts_index = argmax_first(report.row_sums);
    report.trust.resize(n);
    for (std::size_t i = 0; i < n; ++i) report.trust[i] = m(i, report.mts_index);
    return report;
}

SourceRatings source_ratings(const SourceSimilarityMatrix& m, std::string_view biased_source, double bias_value) {
    if (!(bias_value > 0.0)) throw Error("bias value must be positive");
    const std::size_t b = m.index_of(biased_source);
    const double self = m(b, b);
    if (!(self > 0.0)) throw Error("biased source has zero self-similarity");
    SourceRatings out;
    out.biased_source = std::string(biased_source);
    out.bias_value = bias_value;
    out.ratings.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out.ratings[i] = bias_value * m(i, b) / self;
    out.ratings[b] = bias_value;
    out.index_of_maximum = argmax_first(out.ratings);
    return out;
}

SourceRatings uniform_ratings(std::size_t source_count) {
    if (source_count == 0) throw Error("uniform ratings need at least one source");
    SourceRatings out;
    out.ratings.assign(source_count, 1.0);
    out.index_of_maximum = 0;
    return out;
}

}  // namespace entprof
