#include <doctest.h>

#include "entprof/pipeline.hpp"
#include "support.hpp"

using namespace entprof;

namespace {

Dataset small_benchmark(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.entities = 40;
    spec.seed = seed;
    return make_synthetic_benchmark(spec).dataset;
}

}  // namespace

TEST_CASE("pipeline run on a small benchmark") {
    const auto d = small_benchmark(2);
    const auto sim = support::synthetic_similarity(2);
    RunConfig c;
    c.seed = 2;
    c.biased_source = "s1";
    const auto r = run_pipeline(d, sim, c);
    CHECK(r.train_queries == 28);
    CHECK(r.per_query.size() == 12);
    CHECK(r.classifier.has_value());
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.accuracy > 0.5);
    CHECK(r.ratings.biased_source == "s1");
    const auto json = report_to_json(r);
    CHECK(json == report_to_json(run_pipeline(d, sim, c)));

    const auto series = read_report_series(json);
    CHECK(series.query_ids.size() == 12);
    CHECK(series.accuracy[0] == r.per_query[0].accuracy);
    CHECK_THROWS(read_report_series("{}"));
}

TEST_CASE("oracle linking gives perfect resolution") {
    const auto d = small_benchmark(3);
    RunConfig c;
    c.seed = 3;
    c.oracle = true;
    const auto r = run_pipeline(d, support::synthetic_similarity(3), c);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK_FALSE(r.classifier.has_value());
    CHECK_FALSE(r.ablation_test.has_value());  // uniform ratings: nothing to compare
    CHECK(r.accuracy == r.uniform_accuracy);
}

TEST_CASE("comparing two reports pairs shared queries") {
    const auto d = small_benchmark(4);
    const auto sim = support::synthetic_similarity(4);
    RunConfig c;
    c.seed = 4;
    c.biased_source = "s2";
    const auto a = read_report_series(report_to_json(run_pipeline(d, sim, c)));
    c.classifier = ClassifierKind::NaiveBayes;
    const auto b = read_report_series(report_to_json(run_pipeline(d, sim, c)));
    const auto json = compare_reports_json(a, b);
    CHECK(json.find("\"paired_queries\": 12") != std::string::npos);
    CHECK(json.find("\"accuracy\"") != std::string::npos);
    CHECK(compare_reports_json(a, a).find("skipped") != std::string::npos);
}
