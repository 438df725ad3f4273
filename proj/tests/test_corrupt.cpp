#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "entprof/corrupt.hpp"
#include "support.hpp"

using namespace entprof;

namespace {

Dataset clean_benchmark() {
    SyntheticSpec spec;
    spec.entities = 120;
    spec.error_rate = 0.0;
    spec.ambiguity_rate = 0.0;
    return make_synthetic_benchmark(spec).dataset;
}

}  // namespace

TEST_CASE("exact-count error injection") {
    CHECK(corruption_count(0.3, 1000) == 300);
    CHECK(corruption_count(0.1, 30) == 3);
    CHECK_THROWS(corruption_count(1.5, 10));
    const auto d = clean_benchmark();
    CorruptionPlan plan;
    plan.seed = 3;
    plan.error_rate = 0.0;
    CHECK(inject_errors(d, plan) == d);
    plan.error_rate = 1.0;
    const auto all = inject_errors(d, plan);
    for (std::size_t r = 0; r < d.records.size(); ++r)
        for (std::size_t i = 0; i < d.schema.size(); ++i) CHECK(all.records[r].values[i] != d.records[r].values[i]);
    plan.error_rate = 0.3;
    CHECK(inject_errors(d, plan) == inject_errors(d, plan));
}

TEST_CASE("numeric errors stay in the band and integral values stay integral") {
    const auto d = clean_benchmark();
    CorruptionPlan plan;
    plan.error_rate = 1.0;
    plan.seed = 11;
    const auto out = inject_errors(d, plan);
    for (std::size_t r = 0; r < d.records.size(); ++r) {
        for (std::size_t i = 2; i < 5; ++i) {
            const double x = d.records[r].values[i].as_number();
            const double y = out.records[r].values[i].as_number();
            CHECK(y >= std::floor(0.5 * x));
            CHECK(y <= std::ceil(1.5 * x) + 1);
            CHECK(y == std::round(y));
        }
    }
}

TEST_CASE("ambiguity transforms") {
    const std::set<std::string> variants = {ambiguate_name("Sunil Gavaskar", 0), ambiguate_name("Sunil Gavaskar", 1),
                                            ambiguate_name("Sunil Gavaskar", 2)};
    CHECK(variants == std::set<std::string>{"S. Gavaskar", "Gavaskar", "Sunil"});
    CHECK(ambiguate_name("Gavaskar", 2) == "G.");
    CHECK(ambiguate_name("Élan Vital", 0) == "É. Vital");

    const auto d = clean_benchmark();
    CorruptionPlan plan;
    plan.seed = 2;
    plan.ambiguity_rate = 1.0;
    const auto out = inject_ambiguities(d, plan);
    for (std::size_t r = 0; r < d.records.size(); ++r) CHECK(out.records[r].values[0] != d.records[r].values[0]);
    plan.ambiguity_rate = 0.5;
    CHECK(count_modified_cells(d, inject_ambiguities(d, plan)) == d.records.size() / 2);
    plan.name_attribute = 9;
    CHECK_THROWS(inject_ambiguities(d, plan));
}

TEST_CASE("generated queries") {
    SyntheticSpec spec;
    spec.entities = 30;
    const auto b = make_synthetic_benchmark(spec);
    const auto q = make_queries(b.entities, 5, 3, 9);
    REQUIRE(q.queries.size() == 30);
    for (const auto& query : q.queries) {
        CHECK(query.missing_count() == 2);
        CHECK(query.entity_id == query.query_id);
        CHECK(q.truth.count(query.query_id) == 1);
    }
    CHECK(make_queries(b.entities, 5, 3, 9).queries == q.queries);
    CHECK_THROWS(make_queries(b.entities, 5, 5, 9));
    CHECK_THROWS(make_queries(b.entities, 5, 0, 9));
}

TEST_CASE("synthetic benchmark shape") {
    const auto b = make_synthetic_benchmark(SyntheticSpec{});
    const auto& d = b.dataset;
    CHECK(b.entities.size() == 200);
    CHECK(d.sources.size() == 4);
    CHECK(d.queries.size() == 200);
    CHECK(validate(d).empty());
    std::set<std::string> covered;
    for (const auto& r : d.records) covered.insert(*r.entity_id);
    CHECK(covered.size() == 200);

    SyntheticSpec clean;
    clean.clean_sources = {1};
    const auto c = make_synthetic_benchmark(clean);
    std::map<std::string, Tuple> truth;
    for (const auto& e : c.entities) truth[e.entity_id] = e.values;
    for (const auto& r : c.dataset.records)
        if (r.source_id == "s2") CHECK(r.values == truth.at(*r.entity_id));
}
