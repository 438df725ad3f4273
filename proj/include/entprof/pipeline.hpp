#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entprof/classifier.hpp"
#include "entprof/dataset.hpp"
#include "entprof/eval.hpp"
#include "entprof/metrics.hpp"
#include "entprof/profile.hpp"
#include "entprof/similarity.hpp"
#include "entprof/sources.hpp"

namespace entprof {

struct RunConfig {
    ClassifierKind classifier = ClassifierKind::RandomForest;
    Hyperparameters hyperparameters;
    double classifier_split = 0.8;
    double query_split = 0.7;
    std::optional<std::string> biased_source;  // unset: uniform ratings
    double bias_value = 1.0;
    std::uint64_t seed = 0;
    bool oracle = false;  // link by entity annotations instead of a trained classifier
    ProfileOptions profile;
    MatrixOptions matrix;
    // Echoed into the report only.
    std::string records_path, queries_path, truth_path, embeddings_path, schema_path;
};

SourceRatings make_ratings(const SourceSimilarityMatrix& matrix, const RunConfig& config);

struct QueryOutcome {
    std::string query_id;
    double precision = 0.0, recall = 0.0, accuracy = 0.0;
    double uniform_accuracy = 0.0;  // same associations, uniform ratings (ablation)
};

struct RunResult {
    RunConfig config;
    SourceSimilarityMatrix matrix;
    TrustReport trust;
    SourceRatings ratings;
    std::size_t train_queries = 0;
    std::optional<ClassifierMetrics> classifier;  // on the test query pairs
    std::vector<CompletedProfile> profiles;
    std::vector<QueryOutcome> per_query;
    double precision = 0.0, recall = 0.0, accuracy = 0.0;  // means in [0,1]
    double uniform_accuracy = 0.0;
    std::optional<TTestResult> ablation_test;  // biased vs uniform accuracy
    std::string ablation_note;                 // why the test is absent, if it is
};

// Matrix -> trust -> ratings -> query split -> training -> resolution -> selection -> metrics.
RunResult run_pipeline(const Dataset& dataset, const Similarity& sim, const RunConfig& config);

// Stable-key JSON report (values in percent where the report says so).
std::string report_to_json(const RunResult& result);

struct MetricSeries {
    std::vector<std::string> query_ids;
    std::vector<double> precision, recall, accuracy;
};
MetricSeries read_report_series(const std::string& report_json);

// Paired tests of report `a` against report `b` over their shared queries.
std::string compare_reports_json(const MetricSeries& a, const MetricSeries& b);

}  // namespace entprof
