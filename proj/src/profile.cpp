#include "entprof/profile.hpp"

#include <algorithm>
#include <ostream>

#include "entprof/csv.hpp"
#include "json.hpp"

namespace entprof {

LinkPredicate model_linker(const ClassifierModel& model) {
    return [&model](const Query&, const Record&, const FeatureVector& f) { return model.predict(f).label == 1; };
}

LinkPredicate oracle_linker() {
    return [](const Query& q, const Record& r, const FeatureVector&) {
        return q.entity_id && r.entity_id && *q.entity_id == *r.entity_id;
    };
}

std::vector<std::size_t> resolve(const Query& q, const Dataset& dataset, const std::vector<double>& trust,
                                 const Similarity& sim, const LinkPredicate& link) {
    if (trust.size() != dataset.sources.size()) throw Error("trust vector does not match source count");
    const auto source_of = dataset.record_source_indices();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < dataset.records.size(); ++k) {
        const auto& r = dataset.records[k];
        if (link(q, r, extract_features(q, r, trust[source_of[k]], sim))) out.push_back(k);
    }
    return out;
}

std::vector<AttributeValueSet> build_attribute_value_sets(const Dataset& dataset,
                                                          const std::vector<std::size_t>& associated) {
    const std::size_t arity = dataset.schema.size();
    const auto source_of = dataset.record_source_indices();
    std::vector<AttributeValueSet> sets(arity);
    for (std::size_t i = 0; i < arity; ++i) sets[i].attribute = i;
    for (auto k : associated) {
        const auto& r = dataset.records.at(k);
        for (std::size_t i = 0; i < arity; ++i) {
            const auto& v = r.values[i];
            if (v.is_missing()) continue;
            auto& entries = sets[i].entries;
            auto it = std::find_if(entries.begin(), entries.end(), [&](const ValueEntry& e) { return e.value == v; });
            if (it == entries.end()) {
                entries.push_back(ValueEntry{v, 0, {}});
                it = entries.end() - 1;
            }
            ++it->frequency;
            auto pos = std::lower_bound(it->sources.begin(), it->sources.end(), source_of[k]);
            if (pos == it->sources.end() || *pos != source_of[k]) it->sources.insert(pos, source_of[k]);
        }
    }
    return sets;
}

std::vector<double> sim_attribute_val(const AttributeValueSet& avs, const Similarity& sim) {
    const auto& e = avs.entries;
    std::vector<double> t(e.size(), 0.0);
    for (std::size_t a = 0; a < e.size(); ++a) {
        for (std::size_t b = 0; b < e.size(); ++b) {
            if (a != b) t[a] += sim.attribute(e[a].value, e[b].value);
        }
    }
    return t;
}

std::string_view to_string(SelectionOutcome outcome) {
    switch (outcome) {
        case SelectionOutcome::Selected: return "selected";
        case SelectionOutcome::Singleton: return "singleton";
        case SelectionOutcome::Empty: return "empty";
        case SelectionOutcome::QueryRetained: return "query";
    }
    return "?";
}

AttributeTrace select_attribute_value(const AttributeValueSet& avs, const AttributeValue& query_value,
                                      const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                      const Similarity& sim) {
    if (ratings.ratings.size() != matrix.size()) throw Error("ratings do not match the source similarity matrix");
    AttributeTrace trace;
    trace.attribute = avs.attribute;
    if (avs.entries.empty()) {
        trace.outcome = SelectionOutcome::Empty;
        return trace;
    }

    const auto t = sim_attribute_val(avs, sim);
    const std::size_t anchor = ratings.index_of_maximum;
    for (std::size_t k = 0; k < avs.entries.size(); ++k) {
        const auto& e = avs.entries[k];
        CandidateTrace c;
        c.value = e.value;
        c.s = sim.attribute(query_value, e.value);
        c.f = static_cast<double>(e.frequency);
        c.t = t[k];
        // a value published by several sources takes its most favourable source
        bool first = true;
        for (auto s : e.sources) {
            const double v1 = matrix(anchor, s);
            const double rating = ratings.ratings[s];
            if (first || v1 > c.v1 || (v1 == c.v1 && rating > c.rating)) {
                c.v1 = v1;
                c.source = s;
                c.rating = rating;
                first = false;
            }
        }
        c.v2 = similarity_frequency_product(c.s, c.f, c.t);
        c.v3 = c.v1 * c.v2;
        trace.candidates.push_back(std::move(c));
    }

    if (trace.candidates.size() == 1) {
        trace.winner = 0;
        trace.outcome = SelectionOutcome::Singleton;
        return trace;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < trace.candidates.size(); ++k) {
        const auto& a = trace.candidates[k];
        const auto& b = trace.candidates[best];
        if (a.v3 > b.v3 || (a.v3 == b.v3 && (a.rating > b.rating ||
                                              (a.rating == b.rating && a.value.to_cell() < b.value.to_cell())))) {
            best = k;
        }
    }
    trace.winner = best;
    trace.outcome = SelectionOutcome::Selected;
    return trace;
}

CompletedProfile complete_profile(const Query& q, const Dataset& dataset, const std::vector<std::size_t>& associated,
                                  const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                  const Similarity& sim, const ProfileOptions& options) {
    if (matrix.size() != dataset.sources.size()) throw Error("matrix does not match the dataset's sources");
    for (std::size_t s = 0; s < matrix.size(); ++s) {
        if (matrix.source_order()[s] != dataset.sources[s].source_id) {
            throw Error("matrix source order does not match the dataset");
        }
    }
    if (q.values.size() != dataset.schema.size()) throw Error("query arity does not match the schema");

    CompletedProfile p;
    p.query_id = q.query_id;
    p.values = q.values;
    for (auto k : associated) p.associated_record_ids.push_back(dataset.records.at(k).record_id);

    const auto sets = build_attribute_value_sets(dataset, associated);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        auto trace = select_attribute_value(sets[i], q.values[i], ratings, matrix, sim);
        if (trace.winner) {
            if (options.keep_query_values && !q.values[i].is_missing()) {
                trace.outcome = SelectionOutcome::QueryRetained;
            } else {
                p.values[i] = trace.candidates[*trace.winner].value;
            }
        }
        p.traces.push_back(std::move(trace));
    }
    p.complete = std::none_of(p.values.begin(), p.values.end(), [](const auto& v) { return v.is_missing(); });
    return p;
}

CompletedProfile complete_profile(const Query& q, const Dataset& dataset, const LinkPredicate& link,
                                  const SourceRatings& ratings, const SourceSimilarityMatrix& matrix,
                                  const std::vector<double>& trust, const Similarity& sim,
                                  const ProfileOptions& options) {
    return complete_profile(q, dataset, resolve(q, dataset, trust, sim, link), ratings, matrix, sim, options);
}

void write_profiles(std::ostream& out, const Schema& schema, const std::vector<CompletedProfile>& profiles) {
    csv::Row header{"query_id"};
    for (const auto& n : schema.names()) header.push_back(n);
    header.push_back("complete_flag");
    csv::write_row(out, header);
    for (const auto& p : profiles) {
        csv::Row row{p.query_id};
        for (const auto& v : p.values) row.push_back(v.to_cell());
        row.push_back(p.complete ? "1" : "0");
        csv::write_row(out, row);
    }
}

namespace {

nlohmann::json value_json(const AttributeValue& v) {
    if (v.is_missing()) return nullptr;
    if (v.is_number()) return v.as_number();
    return v.as_text();
}

}  // namespace

std::string traces_to_json(const Schema& schema, const SourceSimilarityMatrix& matrix,
                           const std::vector<CompletedProfile>& profiles) {
    using nlohmann::json;
    json doc = json::array();
    for (const auto& p : profiles) {
        json jp;
        jp["query_id"] = p.query_id;
        jp["associated"] = p.associated_record_ids;
        jp["complete"] = p.complete;
        json attrs = json::array();
        for (const auto& t : p.traces) {
            json ja;
            ja["attribute"] = schema[t.attribute].name;
            ja["outcome"] = to_string(t.outcome);
            ja["chosen"] = value_json(p.values[t.attribute]);
            json cands = json::array();
            for (const auto& c : t.candidates) {
                cands.push_back({{"value", value_json(c.value)},
                                 {"S", c.s},
                                 {"F", c.f},
                                 {"T", c.t},
                                 {"V1", c.v1},
                                 {"V2", c.v2},
                                 {"V3", c.v3},
                                 {"source", matrix.source_order()[c.source]},
                                 {"rating", c.rating}});
            }
            ja["candidates"] = std::move(cands);
            attrs.push_back(std::move(ja));
        }
        jp["attributes"] = std::move(attrs);
        doc.push_back(std::move(jp));
    }
    return doc.dump(1) + "\n";
}

}  // namespace entprof
