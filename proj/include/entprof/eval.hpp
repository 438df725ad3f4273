#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "entprof/dataset.hpp"
#include "entprof/profile.hpp"

namespace entprof {

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

// Empty predicted set: precision 1 if the true set is also empty, else 0.
// Empty true set: recall 1 if the predicted set is also empty, else 0.
PrecisionRecall precision_recall(const std::set<std::string>& truth, const std::set<std::string>& predicted);

// Similarity (not distance) between a completed value and its truth value.
// Numbers: 1 - |a-b|/max(|a|,|b|) clamped; text: 1 - edit distance / max length.
// Kind mismatch or a missing completed value scores 0.
double truth_similarity(const AttributeValue& completed, const AttributeValue& truth);

// Mean truth similarity over the attributes present in the truth tuple.
double profile_accuracy(const Tuple& completed, const Tuple& truth);

struct AccuracyResult {
    double mean = 0.0;
    std::vector<double> per_query;  // aligned with the input profiles
};

// Throws if a profile has no truth entry or no profiles are given.
AccuracyResult accuracy(const std::vector<CompletedProfile>& profiles, const std::map<std::string, Tuple>& truth);

struct TTestResult {
    double t_value = 0.0;
    double p_value = 1.0;
    double effect_size = 0.0;
    std::size_t df = 0;
    double mean_difference = 0.0;
};

// Two-sided tail probability P(|T| >= |t|) of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Paired two-sided Student's t-test on a - b; effect size |mean(d)| / sd(d).
// Throws if lengths differ, n < 2, or the differences have zero variance.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace entprof
