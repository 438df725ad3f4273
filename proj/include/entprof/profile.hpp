#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entprof/classifier.hpp"
#include "entprof/dataset.hpp"
#include "entprof/features.hpp"
#include "entprof/similarity.hpp"
#include "entprof/sources.hpp"

namespace entprof {

// Decides whether a record belongs to a query. The feature vector is the one the
// classifier would see for this pair.
using LinkPredicate = std::function<bool(const Query&, const Record&, const FeatureVector&)>;

LinkPredicate model_linker(const ClassifierModel& model);  // model must outlive the predicate
LinkPredicate oracle_linker();                              // entity annotations agree

// Indices into dataset.records of every record the predicate links to `q`.
std::vector<std::size_t> resolve(const Query& q, const Dataset& dataset, const std::vector<double>& trust,
                                 const Similarity& sim, const LinkPredicate& link);

struct ValueEntry {
    AttributeValue value;
    std::size_t frequency = 0;
    std::vector<std::size_t> sources;  // ascending source indices that supplied the value
};

struct AttributeValueSet {
    std::size_t attribute = 0;
    std::vector<ValueEntry> entries;  // distinct values in order of first appearance
};

// One set per attribute; missing values are skipped.
std::vector<AttributeValueSet> build_attribute_value_sets(const Dataset& dataset,
                                                          const std::vector<std::size_t>& associated);

// T for every entry: summed similarity to the other distinct values (0 for a singleton).
std::vector<double> sim_attribute_val(const AttributeValueSet& avs, const Similarity& sim);

// S * F * T, evaluated left to right.
inline double similarity_frequency_product(double s, double f, double t) { return s * f * t; }

struct CandidateTrace {
    AttributeValue value;
    double s = 0.0, f = 0.0, t = 0.0;
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;
    std::size_t source = 0;  // source that determined V1
    double rating = 0.0;     // rating of that source
};

enum class SelectionOutcome { Selected, Singleton, Empty, QueryRetained };
std::string_view to_string(SelectionOutcome outcome);

struct AttributeTrace {
    std::size_t attribute = 0;
    std::vector<CandidateTrace> candidates;
    std::optional<std::size_t> winner;  // index into candidates
    SelectionOutcome outcome = SelectionOutcome::Empty;
};

// Chooses the value for one attribute. An empty set keeps `query_value`.
AttributeTrace select_attribute_value(const AttributeValueSet& avs, const AttributeValue& query_value,
                                      const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                      const Similarity& sim);

struct ProfileOptions {
    // When set, filled query attributes are treated as asserted by the user and kept
    // verbatim; otherwise every attribute with candidates is selected from the records.
    bool keep_query_values = false;
};

struct CompletedProfile {
    std::string query_id;
    Tuple values;
    std::vector<std::string> associated_record_ids;
    std::vector<AttributeTrace> traces;
    bool complete = false;  // no attribute left missing
};

CompletedProfile complete_profile(const Query& q, const Dataset& dataset, const std::vector<std::size_t>& associated,
                                  const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                  const Similarity& sim, const ProfileOptions& options = {});

CompletedProfile complete_profile(const Query& q, const Dataset& dataset, const LinkPredicate& link,
                                  const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                  const std::vector<double>& trust, const Similarity& sim,
                                  const ProfileOptions& options = {});

// `query_id,<attrs>,complete_flag`
void write_profiles(std::ostream& out, const Schema& schema, const std::vector<CompletedProfile>& profiles);
// Structured JSON trace document, one object per profile.
std::string traces_to_json(const Schema& schema, const SourceSimilarityMatrix& matrix,
                           const std::vector<CompletedProfile>& profiles);

}  // namespace entprof
