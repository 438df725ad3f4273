#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace entprof;

TEST_CASE("confusion-based metrics") {
    const ConfusionCounts c{3, 1, 4, 2};
    CHECK(f1_score(c) == doctest::Approx(6.0 / 9.0));
    CHECK(mcc(c) == doctest::Approx(10.0 / std::sqrt(600.0)).epsilon(1e-12));
    CHECK(f1_score({}) == 0.0);
    CHECK(mcc({0, 0, 5, 0}) == 0.0);
    const std::vector<int> t = {1, 0, 1, 1}, p = {1, 1, 0, 1};
    CHECK(confusion(t, p) == ConfusionCounts{2, 1, 0, 1});
}

TEST_CASE("AUC handles ties with mid-ranks") {
    const std::vector<double> s = {0.1, 0.4, 0.35, 0.8, 0.4};
    const std::vector<int> y = {0, 0, 1, 1, 1};
    CHECK(roc_auc(s, y) == doctest::Approx(support::oracle_auc(s, y)).epsilon(1e-12));
    const std::vector<int> one_class = {1, 1, 1, 1, 1};
    CHECK_THROWS(roc_auc(s, one_class));
}

TEST_CASE("random metric sets agree with brute-force oracles") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(25);
        std::vector<int> t(n), p(n);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = rng.uniform() < 0.5;
            p[i] = rng.uniform() < 0.5;
            s[i] = static_cast<double>(rng.index(4));
        }
        const auto c = confusion(t, p);
        CHECK(f1_score(c) == doctest::Approx(support::oracle_f1(t, p)).epsilon(1e-12));
        CHECK(mcc(c) == doctest::Approx(support::oracle_mcc(t, p)).epsilon(1e-12));
        if (c.tp + c.fn > 0 && c.tn + c.fp > 0) {
            CHECK(roc_auc(s, t) == doctest::Approx(support::oracle_auc(s, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("cross-validation and model selection are seeded") {
    Rng rng(4);
    const auto m = support::random_matrix(rng, 300, 4, 8);
    const double e = cv_error(ClassifierKind::DecisionTree, m, {}, 10, 3);
    CHECK(e >= 0.0);
    CHECK(e <= 100.0);
    CHECK(cv_error(ClassifierKind::DecisionTree, m, {}, 10, 3) == e);

    const std::vector kinds = {ClassifierKind::NaiveBayes, ClassifierKind::DecisionTree};
    const auto a = select_model(m, kinds, {}, 5);
    const auto b = select_model(m, kinds, {}, 5);
    REQUIRE(a.table.size() == 2);
    CHECK(a.table[0].kind == ClassifierKind::NaiveBayes);
    CHECK(a.best == b.best);
    CHECK(a.table[1].f1 == b.table[1].f1);
    const auto& best = a.table[a.best == kinds[0] ? 0 : 1];
    for (const auto& row : a.table) CHECK(best.f1 >= row.f1);

    const auto split = split_examples(m, 0.8, 5);
    CHECK(split.train.rows() == 240);
    CHECK(split.test.rows() == 60);
    CHECK_THROWS(split_examples(m, 1.0, 5));
}
