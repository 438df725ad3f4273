#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entprof/features.hpp"

namespace entprof {

enum class ClassifierKind { DecisionTree, RandomForest, NaiveBayes, KNearest };

std::string_view to_string(ClassifierKind kind);        // "tree", "forest", "bayes", "knn"
ClassifierKind parse_classifier_kind(std::string_view name);

struct Hyperparameters {
    std::size_t n_trees = 10;
    std::size_t k = 5;
    bool bootstrap = true;
    // Candidate features per split. 0 = all features for a tree, ceil(sqrt(F)) for a forest.
    std::size_t max_features = 0;
    std::size_t max_depth = 0;  // 0 = unlimited

    friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

// Dense row-major design matrix with binary labels.
struct FeatureMatrix {
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<int> y;

    std::size_t rows() const { return y.size(); }
    std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }

    static FeatureMatrix from(std::span<const LabeledExample> examples);
    FeatureMatrix subset(std::span<const std::size_t> rows) const;
};

struct Prediction {
    int label = 0;
    double score = 0.0;  // label = score >= 0.5
};

// Binary CART tree (Gini). Nodes are stored in pre-order.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 for a leaf
        double threshold = 0.0;  // x[feature] <= threshold goes left
        std::uint32_t left = 0, right = 0;
        std::uint32_t n0 = 0, n1 = 0;  // training label counts reaching the node

        friend bool operator==(const Node&, const Node&) = default;
    };

    // `rows` may repeat (bootstrap). `max_features` = 0 means all.
    static DecisionTree fit(const FeatureMatrix& data, std::span<const std::size_t> rows, std::size_t max_features,
                            std::size_t max_depth, std::uint64_t seed);

    double score(std::span<const double> x) const;  // class-1 fraction in the reached leaf
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<Node>& mutable_nodes() { return nodes_; }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::vector<Node> nodes_;
};

class RandomForest {
public:
    static RandomForest fit(const FeatureMatrix& data, const Hyperparameters& hp, std::uint64_t seed);

    // Fraction of trees voting 1.
    double score(std::span<const double> x) const;
    const std::vector<DecisionTree>& trees() const { return trees_; }
    std::vector<DecisionTree>& mutable_trees() { return trees_; }

private:
    std::vector<DecisionTree> trees_;
};

class NaiveBayes {
public:
    static NaiveBayes fit(const FeatureMatrix& data);
    double score(std::span<const double> x) const;  // posterior of class 1

    std::vector<double> mean[2], variance[2];
    double prior[2] = {0.0, 0.0};
    static constexpr double kVarianceFloor = 1e-9;
};

class KNearest {
public:
    static KNearest fit(FeatureMatrix data, std::size_t k);
    double score(std::span<const double> x) const;  // fraction of the k neighbours labeled 1

    // Indices of the k nearest training rows by (squared distance, row index).
    std::vector<std::size_t> neighbours(std::span<const double> x) const;

    const FeatureMatrix& examples() const { return data_; }
    std::size_t k() const { return k_; }

private:
    struct KdNode {
        std::uint32_t begin = 0, end = 0;  // leaf range into order_
        int axis = -1;                     // -1 for leaf
        double split = 0.0;
        std::uint32_t left = 0, right = 0;
    };
    std::uint32_t build(std::uint32_t begin, std::uint32_t end);

    FeatureMatrix data_;
    std::size_t k_ = 5;
    std::vector<std::uint32_t> order_;
    std::vector<KdNode> kd_;
};

class ClassifierModel {
public:
    using Impl = std::variant<DecisionTree, RandomForest, NaiveBayes, KNearest>;

    ClassifierModel(ClassifierKind kind, Hyperparameters hp, std::uint64_t seed, std::size_t dim, Impl impl);

    ClassifierKind kind() const { return kind_; }
    const Hyperparameters& hyperparameters() const { return hp_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t dimension() const { return dim_; }
    const Impl& impl() const { return impl_; }

    // Throws on dimension mismatch.
    Prediction predict(std::span<const double> features) const;

    // Versioned JSON document; identical models serialize byte-identically.
    std::string serialize() const;
    static ClassifierModel deserialize(std::string_view text);

private:
    ClassifierKind kind_;
    Hyperparameters hp_;
    std::uint64_t seed_;
    std::size_t dim_;
    Impl impl_;
};

// Throws on an empty example list, or k > |examples| for k-NN. Single-class data
// gives a constant classifier.
ClassifierModel train(ClassifierKind kind, const FeatureMatrix& data, const Hyperparameters& hp, std::uint64_t seed);
ClassifierModel train(ClassifierKind kind, std::span<const LabeledExample> examples, const Hyperparameters& hp,
                      std::uint64_t seed);

inline constexpr std::string_view kModelFormat = "entprof-model/1";

}  // namespace entprof
