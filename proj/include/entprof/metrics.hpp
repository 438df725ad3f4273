#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entprof/classifier.hpp"

namespace entprof {

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted);

// Harmonic mean of precision and recall on label 1; 0 when there are no true or predicted positives.
double f1_score(const ConfusionCounts& c);
// Matthews correlation; 0 when any factor under the root is zero.
double mcc(const ConfusionCounts& c);
// Area under the ROC curve via the Mann-Whitney rank statistic with mid-ranks for ties.
// Throws if the labels contain a single class.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Mean misclassification percentage over `folds` seeded folds.
double cv_error(ClassifierKind kind, const FeatureMatrix& data, const Hyperparameters& hp, std::size_t folds,
                std::uint64_t seed);

struct ClassifierMetrics {
    ClassifierKind kind = ClassifierKind::RandomForest;
    double f1 = 0.0;
    double cv_error_percent = 0.0;
    double auc = 0.0;
    double mcc = 0.0;
    ConfusionCounts counts;
};

// Metrics of a trained model on held-out data (cv_error_percent left at 0).
ClassifierMetrics evaluate_classifier(const ClassifierModel& model, const FeatureMatrix& test);

struct ExampleSplit {
    FeatureMatrix train, test;
};
// Seeded shuffle, first round(fraction * n) rows train; both parts must be non-empty.
ExampleSplit split_examples(const FeatureMatrix& data, double train_fraction, std::uint64_t seed);

struct ModelSelection {
    ClassifierKind best = ClassifierKind::RandomForest;
    std::vector<ClassifierMetrics> table;  // in input order
};

struct SelectionOptions {
    double train_fraction = 0.8;
    std::size_t folds = 10;
    bool with_cv = true;
};

// Trains every kind on a seeded example split, picks the highest F1 (then MCC, then input order).
ModelSelection select_model(const FeatureMatrix& data, std::span<const ClassifierKind> kinds, const Hyperparameters& hp,
                            std::uint64_t seed, const SelectionOptions& options = {});

}  // namespace entprof
