// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <fstream>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entprof/corrupt.hpp"
#include "entprof/eval.hpp"
#include "entprof/features.hpp"
#include "entprof/pipeline.hpp"
#include "entprof/profile.hpp"
#include "entprof/sources.hpp"
#include "support.hpp"

using namespace entprof;

namespace {

constexpr double kExact = 1e-9;
constexpr double kMetricTol = 1e-12;
constexpr double kTTol = 1e-3;
constexpr double kAblationMarginPoints = 2.0;
constexpr double kResolutionFloor = 0.90;
constexpr int kSeeds = 5;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: got %.12g want %.12g", what.c_str(), got, want);
        expect(std::fabs(got - want) <= tol, buf);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SourceSimilarityMatrix published_matrix() {
    std::ifstream in(support::data("published_matrix.csv"));
    return read_matrix(in);
}

// 1. Worked examples.
Check worked_examples() {
    Check c;
    auto timed = [&](const char* name, const std::function<void()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const double s = seconds_since(t0);
        c.expect(s < 1.0, std::string(name) + " took " + std::to_string(s) + " s");
    };

    timed("ratings", [&] {
        const SourceSimilarityMatrix m({"s1", "s2", "s3"}, {1.0, 0.3, 0.2, 0.4, 1.0, 0.6, 0.5, 0.7, 1.0});
        const auto r = source_ratings(m, "s1", 2.0);
        c.near(r.ratings[0], 2.0, kExact, "rating s1");
        c.near(r.ratings[1], 0.8, kExact, "rating s2");
        c.near(r.ratings[2], 1.0, kExact, "rating s3");
    });

    timed("trust", [&] {
        const auto m = published_matrix();
        const auto t = trustworthiness_scores(m);
        const double sums[] = {1.0 + 0.3141 + 0.2564 + 0.1602, 0.3199 + 1.0 + 0.2868 + 0.2124,
                               0.2803 + 0.2968 + 1.0 + 0.1802, 0.2277 + 0.4671 + 0.2380 + 1.0};
        const double rounded[] = {1.73, 1.82, 1.76, 1.93};
        const double trust[] = {0.1602, 0.2124, 0.1802, 1.0};
        for (int i = 0; i < 4; ++i) {
            c.near(t.row_sums[i], sums[i], kExact, "row sum " + std::to_string(i + 1));
            c.near(std::round(t.row_sums[i] * 100) / 100, rounded[i], kExact, "rounded row sum");
            c.near(t.trust[i], trust[i], kExact, "trust " + std::to_string(i + 1));
        }
        c.expect(m.source_order()[t.mts_index] == "s4", "most trustworthy source is not s4");
    });

    timed("query-record similarity", [&] {
        const auto d = support::cricket();
        const Similarity plain;  // no embeddings
        c.near(plain.query_record(d.queries[0], d.records[3]), 2.0002, kExact, "q1/r4 without embeddings");
        c.near(support::cricket_similarity().query_record(d.queries[0], d.records[3]), 2.0002, kExact,
               "q1/r4 with embeddings");
    });

    timed("similarity-frequency product", [&] {
        const auto d = support::cricket();
        Similarity sim;
        PairTable pairs;
        pairs.set("Gavaskar", "SM Gavaskar", 0.7).set("Gavaskar", "Sunil Gavaskar", 0.6);
        sim.set_text_override(pairs);
        const auto sets = build_attribute_value_sets(d, {0, 3, 6});
        const auto trace = select_attribute_value(sets[0], d.queries[0].values[0], uniform_ratings(4),
                                                  published_matrix(), sim);
        bool found = false;
        for (const auto& cand : trace.candidates) {
            if (cand.value != AttributeValue::text("Gavaskar")) continue;
            found = true;
            c.near(cand.s, 1.0, kExact, "S");
            c.near(cand.f, 1.0, kExact, "F");
            c.near(cand.t, 1.30, kExact, "T");
            c.near(cand.v2, 1.30, kExact, "similarity-frequency product");
        }
        c.expect(found, "Gavaskar missing from the name value set");
    });

    timed("feature vector", [&] {
        Similarity sim;
        PairTable pairs;
        pairs.set("Pizza Corner", "Pizza Point", 0.36).set("785561264", "909476941", 0.14);
        sim.set_text_override(pairs);
        Query q{"q", {AttributeValue::text("Pizza Corner"), AttributeValue::text("785561264"), {}, {}}, {}};
        Record r{"r", "s", {AttributeValue::text("Pizza Point"), AttributeValue::text("909476941"), {},
                             AttributeValue::text("Varanasi")}, {}};
        const auto f = extract_features(q, r, 0.62, sim);
        const double want[] = {0.36, 0.14, 0.0, 0.0, 1, 1, 0, 1, 0.62};
        c.expect(f.size() == 9, "feature vector length");
        for (std::size_t i = 0; i < 9 && i < f.size(); ++i) c.near(f[i], want[i], kExact, "feature " + std::to_string(i));
    });

    timed("end-to-end profiles", [&] {
        const auto d = support::cricket();
        const auto sim = support::cricket_similarity();
        const auto m = build_source_similarity_matrix(d, sim);
        const auto trust = trustworthiness_scores(m).trust;
        const auto ratings = source_ratings(m, "s4", 1.0);
        ProfileOptions keep;
        keep.keep_query_values = true;  // the expected table keeps q2's "Amarnath"
        for (const auto& q : d.queries) {
            const auto p = complete_profile(q, d, oracle_linker(), ratings, m, trust, sim, keep);
            c.expect(p.values == d.truth.at(q.query_id), "profile " + q.query_id + " differs from the expected table");
        }
    });
    return c;
}

// 2. Metric oracles.
Check metric_oracles() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(30);
        std::vector<int> truth(n), pred(n);
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = rng.uniform() < 0.4;
            pred[i] = rng.uniform() < 0.5;
            scores[i] = static_cast<double>(rng.index(6)) / 5.0;  // coarse grid forces ties
        }
        const auto cc = confusion(truth, pred);
        const std::string tag = " (trial " + std::to_string(trial) + ")";
        c.near(f1_score(cc), support::oracle_f1(truth, pred), kMetricTol, "F1" + tag);
        c.near(mcc(cc), support::oracle_mcc(truth, pred), kMetricTol, "MCC" + tag);
        if (cc.tp + cc.fn > 0 && cc.tn + cc.fp > 0) {
            c.near(roc_auc(scores, truth), support::oracle_auc(scores, truth), kMetricTol, "AUC" + tag);
        }
    }
    const std::pair<double, double> critical[] = {{1, 12.706}, {4, 2.776}, {10, 2.228}, {30, 2.042}};
    for (auto [df, t] : critical) {
        c.near(student_t_two_sided_p(t, df), 0.05, kTTol, "two-sided p at df " + std::to_string(int(df)));
    }
    const std::vector<double> a = {1, 2, 3, 4, 5}, zero(5, 0.0);
    const auto tt = paired_t_test(a, zero);
    c.near(tt.t_value, 4.2426, kTTol, "worked t");
    c.near(tt.p_value, 0.0132, kTTol, "worked p");
    const double s = seconds_since(t0);
    c.expect(s < 10.0, "took " + std::to_string(s) + " s");
    return c;
}

// 3. Classifier properties.
Check classifier_properties() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(99);
    const auto data = support::random_matrix(rng, 400, 7, 10);
    for (auto kind : {ClassifierKind::DecisionTree, ClassifierKind::RandomForest, ClassifierKind::NaiveBayes,
                      ClassifierKind::KNearest}) {
        const auto a = train(kind, data, {}, 17).serialize();
        const auto b = train(kind, data, {}, 17).serialize();
        c.expect(a == b, std::string(to_string(kind)) + " is not deterministic");
    }

    for (int trial = 0; trial < 20; ++trial) {
        const auto m = support::random_matrix(rng, 60, 5, 6);
        Hyperparameters hp;
        hp.n_trees = 1;
        hp.bootstrap = false;
        hp.max_features = m.dim;
        const auto forest = RandomForest::fit(m, hp, 1000 + trial);
        std::vector<std::size_t> all(m.rows());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const auto tree = DecisionTree::fit(m, all, 0, 0, 5);
        c.expect(forest.trees().size() == 1 && forest.trees()[0] == tree,
                 "single-tree forest differs from a tree (trial " + std::to_string(trial) + ")");
    }

    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(19);
        const auto m = support::random_matrix(rng, n, 3, 5);
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        const auto tree = DecisionTree::fit(m, all, 0, 1, 0);
        const auto want = support::oracle_best_split(m);
        const auto& root = tree.nodes()[0];
        const std::string tag = " (trial " + std::to_string(trial) + ")";
        if (want.feature < 0 || support::gini(root.n0, root.n1) == 0.0) {
            c.expect(root.feature == -1, "split where none should exist" + tag);
            continue;
        }
        c.expect(root.feature == want.feature && root.threshold == want.threshold, "root split differs" + tag);
    }
    const double s = seconds_since(t0);
    c.expect(s < 30.0, "took " + std::to_string(s) + " s");
    return c;
}

struct BenchmarkRun {
    std::vector<ClassifierMetrics> table;
    double precision = 0.0, recall = 0.0;
};

SyntheticSpec benchmark_spec(std::uint64_t seed) {
    SyntheticSpec spec;  // 200 entities, 4 sources, error 0.2, ambiguity 0.5
    spec.seed = seed;
    return spec;
}

const std::vector<ClassifierKind> kAllKinds = {ClassifierKind::DecisionTree, ClassifierKind::RandomForest,
                                               ClassifierKind::NaiveBayes, ClassifierKind::KNearest};

// 4 and 6 share the benchmark runs.
std::vector<BenchmarkRun> benchmark_runs() {
    std::vector<BenchmarkRun> runs;
    for (int s = 1; s <= kSeeds; ++s) {
        const auto bench = make_synthetic_benchmark(benchmark_spec(static_cast<std::uint64_t>(s)));
        const auto sim = support::synthetic_similarity(static_cast<std::uint64_t>(s));
        const auto& d = bench.dataset;
        const auto trust = trustworthiness_scores(build_source_similarity_matrix(d, sim)).trust;
        const auto data = FeatureMatrix::from(label_pairs(d.queries, d, trust, sim));
        SelectionOptions opts;
        opts.with_cv = false;
        BenchmarkRun run;
        run.table = select_model(data, kAllKinds, {}, static_cast<std::uint64_t>(s), opts).table;

        RunConfig config;
        config.seed = static_cast<std::uint64_t>(s);
        config.biased_source = "s1";
        const auto result = run_pipeline(d, sim, config);
        run.precision = result.precision;
        run.recall = result.recall;
        runs.push_back(std::move(run));
    }
    return runs;
}

Check classifier_ordering(const std::vector<BenchmarkRun>& runs, double elapsed) {
    Check c;
    std::vector<double> mean(kAllKinds.size(), 0.0);
    for (const auto& r : runs)
        for (std::size_t k = 0; k < kAllKinds.size(); ++k) mean[k] += r.table[k].f1 / kSeeds;
    std::ostringstream f1s;
    for (std::size_t k = 0; k < kAllKinds.size(); ++k) f1s << (k ? " " : "") << to_string(kAllKinds[k]) << "=" << mean[k];
    for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
        c.expect(mean[1] >= mean[k], "forest F1 below " + std::string(to_string(kAllKinds[k])) + " [" + f1s.str() + "]");
    }
    c.expect(elapsed < 120.0, "took " + std::to_string(elapsed) + " s");
    if (c.ok) c.detail = "mean F1 " + f1s.str();
    return c;
}

Check resolution_quality(const std::vector<BenchmarkRun>& runs) {
    Check c;
    double p = 0, r = 0;
    for (const auto& run : runs) {
        p += run.precision / kSeeds;
        r += run.recall / kSeeds;
    }
    const std::string pr = "precision " + std::to_string(p) + " recall " + std::to_string(r);
    c.expect(p >= kResolutionFloor && r >= kResolutionFloor, pr);
    if (c.ok) c.detail = pr;
    return c;
}

// 5. Biasing ablation.
Check biasing_ablation() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    double biased = 0, uniform = 0;
    for (int s = 1; s <= kSeeds; ++s) {
        SyntheticSpec spec;
        spec.seed = static_cast<std::uint64_t>(100 + s);
        spec.error_rate = 0.3;
        spec.ambiguity_rate = 0.0;
        spec.clean_sources = {spec.sources - 1};
        const auto bench = make_synthetic_benchmark(spec);
        const auto sim = support::synthetic_similarity(spec.seed);
        RunConfig config;
        config.seed = spec.seed;
        config.oracle = true;
        config.biased_source = "s" + std::to_string(spec.sources);
        config.bias_value = 1.0;
        const auto result = run_pipeline(bench.dataset, sim, config);
        biased += 100.0 * result.accuracy / kSeeds;
        uniform += 100.0 * result.uniform_accuracy / kSeeds;
    }
    const std::string msg = "biased " + std::to_string(biased) + "% uniform " + std::to_string(uniform) + "%";
    c.expect(biased - uniform >= kAblationMarginPoints, msg);
    const double s = seconds_since(t0);
    c.expect(s < 120.0, "took " + std::to_string(s) + " s");
    if (c.ok) c.detail = msg;
    return c;
}

std::string records_csv(const Dataset& d) {
    std::ostringstream out;
    write_records(out, d.schema, d.records);
    return out.str();
}

// 7. Corruption generator.
Check corruption() {
    Check c;
    SyntheticSpec spec;
    spec.error_rate = 0.0;
    spec.ambiguity_rate = 0.0;
    const auto clean = make_synthetic_benchmark(spec).dataset;
    std::size_t cells = 0;
    for (const auto& r : clean.records)
        for (const auto& v : r.values) cells += !v.is_missing();
    for (double rate : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.0}) {
        CorruptionPlan plan;
        plan.error_rate = rate;
        plan.seed = 7;
        const auto a = inject_errors(clean, plan);
        const auto want = static_cast<std::size_t>(std::floor(rate * static_cast<double>(cells) + 1e-9));
        c.expect(count_modified_cells(clean, a) == want, "modified-cell count at rate " + std::to_string(rate));
        plan.ambiguity_rate = 0.5;
        const auto x = records_csv(inject_ambiguities(inject_errors(clean, plan), plan));
        const auto y = records_csv(inject_ambiguities(inject_errors(clean, plan), plan));
        c.expect(x == y, "corrupted CSV not byte-identical at rate " + std::to_string(rate));
    }
    return c;
}

// 8. Full-run determinism, including the threaded matrix against a sequential one.
Check full_run_determinism() {
    Check c;
    auto bench = make_synthetic_benchmark(benchmark_spec(3));
    const auto sim = support::synthetic_similarity(3);
    RunConfig config;
    config.seed = 3;
    config.biased_source = "s2";
    config.bias_value = 1.5;
    const auto a = report_to_json(run_pipeline(bench.dataset, sim, config));
    const auto b = report_to_json(run_pipeline(bench.dataset, sim, config));
    config.matrix.threads = 1;
    const auto sequential = report_to_json(run_pipeline(bench.dataset, sim, config));
    c.expect(a == b, "reports differ between identical runs");
    c.expect(a == sequential, "threaded report differs from the sequential one");
    return c;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* name, const Check& c) {
        std::printf("%s criterion %d (%s)%s%s\n", c.ok ? "PASS" : "FAIL", n, name, c.detail.empty() ? "" : ": ",
                    c.detail.c_str());
        std::fflush(stdout);
        failures += !c.ok;
    };
    try {
        report(1, "worked examples", worked_examples());
        report(2, "metric oracles", metric_oracles());
        report(3, "classifier properties", classifier_properties());
        const auto t0 = std::chrono::steady_clock::now();
        const auto runs = benchmark_runs();
        report(4, "classifier ordering", classifier_ordering(runs, seconds_since(t0)));
        report(5, "biasing ablation", biasing_ablation());
        report(6, "resolution quality", resolution_quality(runs));
        report(7, "corruption generator", corruption());
        report(8, "full-run determinism", full_run_determinism());
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
