#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "entprof/classifier.hpp"
#include "entprof/io.hpp"
#include "entprof/metrics.hpp"
#include "entprof/rng.hpp"
#include "entprof/similarity.hpp"
#include "entprof/synthetic.hpp"

namespace support {

inline std::string data(const std::string& name) { return std::string(ENTPROF_TEST_DATA) + "/" + name; }

inline entprof::Dataset cricket() {
    return entprof::load_dataset(data("cricket.schema"), data("cricket_records.csv"), data("cricket_queries.csv"),
                                 data("cricket_truth.csv"));
}

inline entprof::Similarity cricket_similarity() {
    auto store = std::make_shared<const entprof::EmbeddingStore>(
        entprof::EmbeddingStore::load(data("stub_embeddings.txt")));
    return entprof::Similarity({}, store);
}

inline entprof::Similarity synthetic_similarity(std::uint64_t seed = 1) {
    auto store = std::make_shared<const entprof::EmbeddingStore>(
        entprof::stub_embeddings(entprof::synthetic_vocabulary(), 16, seed));
    return entprof::Similarity({}, store);
}

// Brute-force oracles, written independently of the library's formulas.

inline double oracle_f1(std::span<const int> truth, std::span<const int> pred) {
    double tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        tp += truth[i] && pred[i];
        predicted += pred[i];
        actual += truth[i];
    }
    if (tp == 0) return 0.0;
    const double p = tp / predicted, r = tp / actual;
    return 2 * p * r / (p + r);
}

// Pearson correlation of the two 0/1 vectors; 0 when either is constant.
inline double oracle_mcc(std::span<const int> truth, std::span<const int> pred) {
    const double n = static_cast<double>(truth.size());
    double mt = 0, mp = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        mt += truth[i] / n;
        mp += pred[i] / n;
    }
    double cov = 0, vt = 0, vp = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        cov += (truth[i] - mt) * (pred[i] - mp);
        vt += (truth[i] - mt) * (truth[i] - mt);
        vp += (pred[i] - mp) * (pred[i] - mp);
    }
    if (vt == 0 || vp == 0) return 0.0;
    return cov / std::sqrt(vt * vp);
}

// Probability a random positive outscores a random negative, ties counting one half.
inline double oracle_auc(std::span<const double> scores, std::span<const int> labels) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            pairs += 1;
            wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        }
    }
    return pairs == 0 ? 0.0 : wins / pairs;
}

inline double gini(double n0, double n1) {
    const double n = n0 + n1;
    if (n == 0) return 0.0;
    return 1.0 - (n0 / n) * (n0 / n) - (n1 / n) * (n1 / n);
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child Gini
};

// Every (feature, midpoint) in ascending order; keeps the first strict minimum.
inline SplitChoice oracle_best_split(const entprof::FeatureMatrix& m) {
    SplitChoice best;
    best.impurity = INFINITY;
    const double n = static_cast<double>(m.rows());
    for (std::size_t f = 0; f < m.dim; ++f) {
        std::vector<double> values;
        for (std::size_t i = 0; i < m.rows(); ++i) values.push_back(m.row(i)[f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            const double thr = values[v] + (values[v + 1] - values[v]) / 2;
            double l[2] = {0, 0}, r[2] = {0, 0};
            for (std::size_t i = 0; i < m.rows(); ++i) (m.row(i)[f] <= thr ? l : r)[m.y[i]] += 1;
            const double imp = ((l[0] + l[1]) * gini(l[0], l[1]) + (r[0] + r[1]) * gini(r[0], r[1])) / n;
            if (imp < best.impurity - 1e-12) best = {static_cast<int>(f), thr, imp};
        }
    }
    return best;
}

inline entprof::FeatureMatrix random_matrix(entprof::Rng& rng, std::size_t rows, std::size_t dim, int levels) {
    entprof::FeatureMatrix m;
    m.dim = dim;
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0;
        for (std::size_t f = 0; f < dim; ++f) {
            const double x = static_cast<double>(rng.index(static_cast<std::size_t>(levels))) / levels;
            m.x.push_back(x);
            s += x * static_cast<double>(f + 1);
        }
        const bool noisy = rng.uniform() < 0.15;
        m.y.push_back((s > static_cast<double>(dim) * 1.5) != noisy ? 1 : 0);
    }
    return m;
}

}  // namespace support
