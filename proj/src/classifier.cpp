#include "entprof/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "entprof/rng.hpp"
#include "json.hpp"

namespace entprof {

using json = nlohmann::json;

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::DecisionTree: return "tree";
        case ClassifierKind::RandomForest: return "forest";
        case ClassifierKind::NaiveBayes: return "bayes";
        case ClassifierKind::KNearest: return "knn";
    }
    return "?";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "tree") return ClassifierKind::DecisionTree;
    if (name == "forest") return ClassifierKind::RandomForest;
    if (name == "bayes") return ClassifierKind::NaiveBayes;
    if (name == "knn") return ClassifierKind::KNearest;
    throw Error("unknown classifier '" + std::string(name) + "' (expected tree, forest, bayes or knn)");
}

FeatureMatrix FeatureMatrix::from(std::span<const LabeledExample> examples) {
    FeatureMatrix m;
    if (examples.empty()) return m;
    m.dim = examples.front().features.size();
    m.x.reserve(examples.size() * m.dim);
    m.y.reserve(examples.size());
    for (const auto& ex : examples) {
        if (ex.features.size() != m.dim) throw Error("examples have inconsistent feature length");
        if (ex.label != 0 && ex.label != 1) throw Error("labels must be 0 or 1");
        m.x.insert(m.x.end(), ex.features.begin(), ex.features.end());
        m.y.push_back(ex.label);
    }
    return m;
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> rows) const {
    FeatureMatrix m;
    m.dim = dim;
    m.x.reserve(rows.size() * dim);
    m.y.reserve(rows.size());
    for (auto r : rows) {
        auto v = row(r);
        m.x.insert(m.x.end(), v.begin(), v.end());
        m.y.push_back(y[r]);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Decision tree

namespace {

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double purity = -1.0;  // (l0^2 + l1^2)/nl + (r0^2 + r1^2)/nr, larger is better
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& data, std::span<const std::size_t> rows, std::size_t max_features,
                std::size_t max_depth, std::uint64_t seed)
        : n_(rows.size()), dim_(data.dim), max_depth_(max_depth), rng_(seed) {
        m_ = max_features == 0 || max_features > dim_ ? dim_ : max_features;
        labels_.resize(n_);
        cols_.assign(dim_, std::vector<double>(n_));
        for (std::size_t s = 0; s < n_; ++s) {
            labels_[s] = static_cast<std::uint8_t>(data.y[rows[s]]);
            auto row = data.row(rows[s]);
            for (std::size_t f = 0; f < dim_; ++f) cols_[f][s] = row[f];
        }
        sorted_.assign(dim_, std::vector<std::uint32_t>(n_));
        for (std::size_t f = 0; f < dim_; ++f) {
            auto& idx = sorted_[f];
            std::iota(idx.begin(), idx.end(), 0u);
            const auto& col = cols_[f];
            std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
        }
        goes_left_.resize(n_);
        scratch_.resize(n_);
        features_.resize(dim_);
        std::iota(features_.begin(), features_.end(), 0);
    }

    std::vector<DecisionTree::Node> build() {
        struct Task {
            std::uint32_t begin, end, depth;
            std::int64_t parent;  // -1 for root
            bool is_right;
        };
        std::vector<DecisionTree::Node> nodes;
        std::vector<Task> stack{{0, static_cast<std::uint32_t>(n_), 0, -1, false}};
        while (!stack.empty()) {
            Task t = stack.back();
            stack.pop_back();
            const auto id = static_cast<std::uint32_t>(nodes.size());
            if (t.parent >= 0) {
                auto& p = nodes[static_cast<std::size_t>(t.parent)];
                (t.is_right ? p.right : p.left) = id;
            }
            DecisionTree::Node node;
            for (std::uint32_t i = t.begin; i < t.end; ++i) (labels_[sorted_[0][i]] ? node.n1 : node.n0)++;
            nodes.push_back(node);

            const std::uint32_t count = t.end - t.begin;
            if (node.n0 == 0 || node.n1 == 0 || count < 2 || (max_depth_ && t.depth >= max_depth_)) continue;
            const SplitCandidate best = choose_split(t.begin, t.end, node.n0, node.n1);
            if (best.feature < 0) continue;

            const std::uint32_t mid = partition(t.begin, t.end, best);
            nodes[id].feature = best.feature;
            nodes[id].threshold = best.threshold;
            stack.push_back({mid, t.end, t.depth + 1, id, true});
            stack.push_back({t.begin, mid, t.depth + 1, id, false});
        }
        return nodes;
    }

private:
    SplitCandidate choose_split(std::uint32_t begin, std::uint32_t end, std::uint32_t n0, std::uint32_t n1) {
        std::vector<int> candidates(features_), rest;
        if (m_ < dim_) {
            rng_.shuffle(candidates);
            rest.assign(candidates.begin() + static_cast<std::ptrdiff_t>(m_), candidates.end());
            candidates.resize(m_);
            std::sort(candidates.begin(), candidates.end());
            std::sort(rest.begin(), rest.end());
        }
        SplitCandidate best;
        for (int f : candidates) scan_feature(f, begin, end, n0, n1, best);
        // no informative candidate: fall back to the remaining features
        if (best.feature < 0) {
            for (int f : rest) scan_feature(f, begin, end, n0, n1, best);
        }
        return best;
    }

    void scan_feature(int f, std::uint32_t begin, std::uint32_t end, std::uint32_t n0, std::uint32_t n1,
                      SplitCandidate& best) const {
        const auto& idx = sorted_[static_cast<std::size_t>(f)];
        const auto& col = cols_[static_cast<std::size_t>(f)];
        double l0 = 0, l1 = 0;
        const double total = static_cast<double>(end - begin);
        for (std::uint32_t i = begin; i + 1 < end; ++i) {
            (labels_[idx[i]] ? l1 : l0) += 1.0;
            const double v = col[idx[i]];
            const double next = col[idx[i + 1]];
            if (!(v < next)) continue;
            const double nl = l0 + l1;
            const double nr = total - nl;
            const double r0 = n0 - l0, r1 = n1 - l1;
            const double purity = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr;
            if (purity > best.purity) {
                best.purity = purity;
                best.feature = f;
                double mid = std::midpoint(v, next);
                if (!(mid < next)) mid = v;
                best.threshold = mid;
            }
        }
    }

    std::uint32_t partition(std::uint32_t begin, std::uint32_t end, const SplitCandidate& split) {
        const auto& col = cols_[static_cast<std::size_t>(split.feature)];
        for (std::uint32_t i = begin; i < end; ++i) {
            const auto s = sorted_[0][i];
            goes_left_[s] = col[s] <= split.threshold;
        }
        std::uint32_t mid = begin;
        for (auto& idx : sorted_) {
            std::uint32_t l = begin, r = 0;
            for (std::uint32_t i = begin; i < end; ++i) {
                const auto s = idx[i];
                if (goes_left_[s]) idx[l++] = s;
                else scratch_[r++] = s;
            }
            std::copy(scratch_.begin(), scratch_.begin() + r, idx.begin() + l);
            mid = l;
        }
        return mid;
    }

    std::size_t n_, dim_, m_, max_depth_;
    Rng rng_;
    std::vector<std::uint8_t> labels_;
    std::vector<std::vector<double>> cols_;
    std::vector<std::vector<std::uint32_t>> sorted_;
    std::vector<std::uint8_t> goes_left_;
    std::vector<std::uint32_t> scratch_;
    std::vector<int> features_;
};

}  // namespace

DecisionTree DecisionTree::fit(const FeatureMatrix& data, std::span<const std::size_t> rows, std::size_t max_features,
                               std::size_t max_depth, std::uint64_t seed) {
    if (rows.empty()) throw Error("cannot fit a tree on zero examples");
    DecisionTree tree;
    tree.nodes_ = TreeBuilder(data, rows, max_features, max_depth, seed).build();
    return tree;
}

double DecisionTree::score(std::span<const double> x) const {
    std::uint32_t i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    const auto& leaf = nodes_[i];
    return static_cast<double>(leaf.n1) / static_cast<double>(leaf.n0 + leaf.n1);
}

// ---------------------------------------------------------------------------
// Random forest

RandomForest RandomForest::fit(const FeatureMatrix& data, const Hyperparameters& hp, std::uint64_t seed) {
    if (hp.n_trees == 0) throw Error("a forest needs at least one tree");
    const std::size_t n = data.rows();
    const std::size_t m = hp.max_features ? hp.max_features
                                          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.dim))));
    RandomForest forest;
    forest.trees_.reserve(hp.n_trees);
    std::vector<std::size_t> rows(n);
    for (std::size_t t = 0; t < hp.n_trees; ++t) {
        const std::uint64_t tree_seed = Rng::derive(seed, t);
        if (hp.bootstrap) {
            Rng draw(tree_seed);
            for (auto& r : rows) r = draw.index(n);
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        forest.trees_.push_back(DecisionTree::fit(data, rows, m, hp.max_depth, Rng::derive(tree_seed, 0x5eed)));
    }
    return forest;
}

double RandomForest::score(std::span<const double> x) const {
    std::size_t votes = 0;
    for (const auto& t : trees_) votes += t.score(x) >= 0.5 ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

NaiveBayes NaiveBayes::fit(const FeatureMatrix& data) {
    NaiveBayes nb;
    const std::size_t d = data.dim;
    double count[2] = {0, 0};
    for (int c = 0; c < 2; ++c) {
        nb.mean[c].assign(d, 0.0);
        nb.variance[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const int c = data.y[i];
        count[c] += 1;
        auto row = data.row(i);
        for (std::size_t f = 0; f < d; ++f) nb.mean[c][f] += row[f];
    }
    for (int c = 0; c < 2; ++c)
        if (count[c] > 0)
            for (auto& m : nb.mean[c]) m /= count[c];
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const int c = data.y[i];
        auto row = data.row(i);
        for (std::size_t f = 0; f < d; ++f) {
            const double dev = row[f] - nb.mean[c][f];
            nb.variance[c][f] += dev * dev;
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& v : nb.variance[c]) v = std::max(count[c] > 0 ? v / count[c] : 0.0, kVarianceFloor);
        nb.prior[c] = count[c] / static_cast<double>(data.rows());
    }
    return nb;
}

double NaiveBayes::score(std::span<const double> x) const {
    if (prior[1] == 0.0) return 0.0;
    if (prior[0] == 0.0) return 1.0;
    double log_joint[2];
    for (int c = 0; c < 2; ++c) {
        double l = std::log(prior[c]);
        for (std::size_t f = 0; f < x.size(); ++f) {
            const double dev = x[f] - mean[c][f];
            l -= 0.5 * std::log(2.0 * M_PI * variance[c][f]) + dev * dev / (2.0 * variance[c][f]);
        }
        log_joint[c] = l;
    }
    return 1.0 / (1.0 + std::exp(log_joint[0] - log_joint[1]));
}

// ---------------------------------------------------------------------------
// k nearest neighbours

KNearest KNearest::fit(FeatureMatrix data, std::size_t k) {
    if (k == 0) throw Error("k must be positive");
    if (k > data.rows()) throw Error("k exceeds the number of training examples");
    KNearest knn;
    knn.data_ = std::move(data);
    knn.k_ = k;
    knn.order_.resize(knn.data_.rows());
    std::iota(knn.order_.begin(), knn.order_.end(), 0u);
    knn.kd_.reserve(2 * knn.data_.rows() / 8 + 1);
    knn.build(0, static_cast<std::uint32_t>(knn.order_.size()));
    return knn;
}

std::uint32_t KNearest::build(std::uint32_t begin, std::uint32_t end) {
    constexpr std::uint32_t kLeafSize = 16;
    const auto id = static_cast<std::uint32_t>(kd_.size());
    kd_.push_back(KdNode{begin, end});
    if (end - begin <= kLeafSize) return id;

    const std::size_t d = data_.dim;
    int axis = -1;
    double spread = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::uint32_t i = begin; i < end; ++i) {
            const double v = data_.x[order_[i] * d + f];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > spread) {
            spread = hi - lo;
            axis = static_cast<int>(f);
        }
    }
    if (axis < 0) return id;  // all points identical

    const std::uint32_t mid = begin + (end - begin) / 2;
    const auto a = static_cast<std::size_t>(axis);
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t p, std::uint32_t q) {
                         const double vp = data_.x[p * d + a], vq = data_.x[q * d + a];
                         return vp < vq || (vp == vq && p < q);
                     });
    const double split = data_.x[order_[mid] * d + a];
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    kd_[id].axis = axis;
    kd_[id].split = split;
    kd_[id].left = left;
    kd_[id].right = right;
    return id;
}

std::vector<std::size_t> KNearest::neighbours(std::span<const double> x) const {
    using Entry = std::pair<double, std::uint32_t>;  // (squared distance, row); max-heap
    std::priority_queue<Entry> heap;
    const std::size_t d = data_.dim;

    auto visit_leaf = [&](const KdNode& n) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const std::uint32_t row = order_[i];
            double d2 = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                const double diff = x[f] - data_.x[row * d + f];
                d2 += diff * diff;
            }
            Entry e{d2, row};
            if (heap.size() < k_) heap.push(e);
            else if (e < heap.top()) {
                heap.pop();
                heap.push(e);
            }
        }
    };

    auto search = [&](auto&& self, std::uint32_t id) -> void {
        const KdNode& n = kd_[id];
        if (n.axis < 0) {
            visit_leaf(n);
            return;
        }
        const double diff = x[static_cast<std::size_t>(n.axis)] - n.split;
        const std::uint32_t near = diff <= 0 ? n.left : n.right;
        const std::uint32_t far = diff <= 0 ? n.right : n.left;
        self(self, near);
        // equal distances still matter because ties break on row index
        if (heap.size() < k_ || diff * diff <= heap.top().first) self(self, far);
    };
    search(search, 0);

    std::vector<std::size_t> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = heap.top().second;
        heap.pop();
    }
    return out;
}

double KNearest::score(std::span<const double> x) const {
    const auto nn = neighbours(x);
    std::size_t pos = 0;
    for (auto i : nn) pos += static_cast<std::size_t>(data_.y[i]);
    return static_cast<double>(pos) / static_cast<double>(nn.size());
}

// ---------------------------------------------------------------------------
// Model wrapper

ClassifierModel::ClassifierModel(ClassifierKind kind, Hyperparameters hp, std::uint64_t seed, std::size_t dim, Impl impl)
    : kind_(kind), hp_(hp), seed_(seed), dim_(dim), impl_(std::move(impl)) {}

Prediction ClassifierModel::predict(std::span<const double> features) const {
    if (features.size() != dim_) {
        throw Error("feature vector has " + std::to_string(features.size()) + " components, model expects " +
                    std::to_string(dim_));
    }
    Prediction p;
    p.score = std::visit([&](const auto& m) { return m.score(features); }, impl_);
    p.label = p.score >= 0.5 ? 1 : 0;
    return p;
}

ClassifierModel train(ClassifierKind kind, const FeatureMatrix& data, const Hyperparameters& hp, std::uint64_t seed) {
    if (data.rows() == 0) throw Error("cannot train on an empty example list");
    switch (kind) {
        case ClassifierKind::DecisionTree: {
            std::vector<std::size_t> rows(data.rows());
            std::iota(rows.begin(), rows.end(), std::size_t{0});
            return {kind, hp, seed, data.dim, DecisionTree::fit(data, rows, hp.max_features, hp.max_depth, seed)};
        }
        case ClassifierKind::RandomForest:
            return {kind, hp, seed, data.dim, RandomForest::fit(data, hp, seed)};
        case ClassifierKind::NaiveBayes:
            return {kind, hp, seed, data.dim, NaiveBayes::fit(data)};
        case ClassifierKind::KNearest:
            return {kind, hp, seed, data.dim, KNearest::fit(data, hp.k)};
    }
    throw Error("unknown classifier kind");
}

ClassifierModel train(ClassifierKind kind, std::span<const LabeledExample> examples, const Hyperparameters& hp,
                      std::uint64_t seed) {
    return train(kind, FeatureMatrix::from(examples), hp, seed);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

// Pre-order nested lists: a leaf is [n0, n1], a split is [feature, threshold, left, right].
json tree_to_json(const DecisionTree& tree, std::uint32_t id = 0) {
    const auto& n = tree.nodes()[id];
    if (n.feature < 0) return json::array({n.n0, n.n1});
    return json::array({n.feature, n.threshold, tree_to_json(tree, n.left), tree_to_json(tree, n.right)});
}

// Returns {n0, n1} of the subtree root so parents can reconstruct counts.
std::pair<std::uint32_t, std::uint32_t> tree_from_json(const json& j, std::vector<DecisionTree::Node>& nodes) {
    const auto id = nodes.size();
    nodes.emplace_back();
    if (!j.is_array()) throw Error("malformed tree node");
    if (j.size() == 2) {
        nodes[id].n0 = j[0].get<std::uint32_t>();
        nodes[id].n1 = j[1].get<std::uint32_t>();
        if (nodes[id].n0 + nodes[id].n1 == 0) throw Error("empty tree leaf");
        return {nodes[id].n0, nodes[id].n1};
    }
    if (j.size() != 4) throw Error("malformed tree node");
    const int feature = j[0].get<int>();
    const double threshold = j[1].get<double>();
    const auto left = static_cast<std::uint32_t>(nodes.size());
    auto lc = tree_from_json(j[2], nodes);
    const auto right = static_cast<std::uint32_t>(nodes.size());
    auto rc = tree_from_json(j[3], nodes);
    auto& n = nodes[id];
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    n.n0 = lc.first + rc.first;
    n.n1 = lc.second + rc.second;
    return {n.n0, n.n1};
}

DecisionTree parse_tree(const json& j, std::size_t dim) {
    DecisionTree t;
    tree_from_json(j, t.mutable_nodes());
    for (const auto& n : t.nodes()) {
        if (n.feature >= static_cast<int>(dim)) throw Error("tree splits on an unknown feature");
    }
    return t;
}

}  // namespace

std::string ClassifierModel::serialize() const {
    json doc;
    doc["format"] = kModelFormat;
    doc["kind"] = to_string(kind_);
    doc["seed"] = seed_;
    doc["features"] = dim_;
    doc["hyperparameters"] = {{"n_trees", hp_.n_trees},
                              {"k", hp_.k},
                              {"bootstrap", hp_.bootstrap},
                              {"max_features", hp_.max_features},
                              {"max_depth", hp_.max_depth}};
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DecisionTree>) {
                doc["tree"] = tree_to_json(m);
            } else if constexpr (std::is_same_v<T, RandomForest>) {
                json trees = json::array();
                for (const auto& t : m.trees()) trees.push_back(tree_to_json(t));
                doc["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, NaiveBayes>) {
                doc["prior"] = {m.prior[0], m.prior[1]};
                doc["mean"] = {m.mean[0], m.mean[1]};
                doc["variance"] = {m.variance[0], m.variance[1]};
            } else {
                doc["x"] = m.examples().x;
                doc["y"] = m.examples().y;
            }
        },
        impl_);
    return doc.dump(1) + "\n";
}

ClassifierModel ClassifierModel::deserialize(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("model is not valid JSON: ") + e.what());
    }
    try {
        if (doc.value("format", "") != kModelFormat) throw Error("unsupported model format");
        const auto kind = parse_classifier_kind(doc.at("kind").get<std::string>());
        const auto seed = doc.at("seed").get<std::uint64_t>();
        const auto dim = doc.at("features").get<std::size_t>();
        const auto& h = doc.at("hyperparameters");
        Hyperparameters hp;
        hp.n_trees = h.at("n_trees").get<std::size_t>();
        hp.k = h.at("k").get<std::size_t>();
        hp.bootstrap = h.at("bootstrap").get<bool>();
        hp.max_features = h.at("max_features").get<std::size_t>();
        hp.max_depth = h.at("max_depth").get<std::size_t>();
        switch (kind) {
            case ClassifierKind::DecisionTree:
                return {kind, hp, seed, dim, parse_tree(doc.at("tree"), dim)};
            case ClassifierKind::RandomForest: {
                RandomForest forest;
                for (const auto& t : doc.at("trees")) forest.mutable_trees().push_back(parse_tree(t, dim));
                if (forest.trees().empty()) throw Error("forest has no trees");
                return {kind, hp, seed, dim, std::move(forest)};
            }
            case ClassifierKind::NaiveBayes: {
                NaiveBayes nb;
                for (int c = 0; c < 2; ++c) {
                    nb.prior[c] = doc.at("prior").at(c).get<double>();
                    nb.mean[c] = doc.at("mean").at(c).get<std::vector<double>>();
                    nb.variance[c] = doc.at("variance").at(c).get<std::vector<double>>();
                    if (nb.mean[c].size() != dim || nb.variance[c].size() != dim) throw Error("bayes parameter length");
                }
                return {kind, hp, seed, dim, std::move(nb)};
            }
            case ClassifierKind::KNearest: {
                FeatureMatrix m;
                m.dim = dim;
                m.x = doc.at("x").get<std::vector<double>>();
                m.y = doc.at("y").get<std::vector<int>>();
                if (m.x.size() != m.y.size() * dim) throw Error("knn example matrix has the wrong size");
                return {kind, hp, seed, dim, KNearest::fit(std::move(m), hp.k)};
            }
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model: ") + e.what());
    }
    throw Error("unknown classifier kind");
}

}  // namespace entprof
