#include <doctest.h>

#include <cmath>
#include <sstream>

#include "entprof/sources.hpp"
#include "support.hpp"

using namespace entprof;

namespace {

std::u32string decode(std::string_view s) {
    std::u32string out;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        const int len = c < 0x80 ? 1 : c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
        char32_t cp = len == 1 ? c : c & (0xFF >> (len + 1));
        for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

// Full-table edit distance.
std::size_t oracle_levenshtein(std::string_view a8, std::string_view b8) {
    const auto a = decode(a8), b = decode(b8);
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    return d[a.size()][b.size()];
}

std::string random_word(Rng& rng) {
    static const char* pieces[] = {"a", "b", "an", "na", "é", "ß", " ", "Singh", "x"};
    std::string s;
    const auto n = rng.index(6);
    for (std::size_t i = 0; i < n; ++i) s += pieces[rng.index(9)];
    return s;
}

}  // namespace

TEST_CASE("numeric similarity") {
    CHECK(numeric_similarity(1900, 1710) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(numeric_similarity(0, 0) == 1.0);
    CHECK(numeric_similarity(5, 5) == 1.0);
    CHECK(numeric_similarity(-5, 5) == 0.0);
    CHECK(numeric_similarity(0, 7) == 0.0);
    CHECK(numeric_similarity(3, 6) == numeric_similarity(6, 3));
}

TEST_CASE("edit distance matches a full-table oracle") {
    CHECK(levenshtein_distance("kitten", "sitting") == 3);
    CHECK(levenshtein_similarity("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
    CHECK(levenshtein_similarity("", "") == 1.0);
    CHECK(levenshtein_distance("café", "cafe") == 1);
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_word(rng), b = random_word(rng);
        CHECK(levenshtein_distance(a, b) == oracle_levenshtein(a, b));
        CHECK(levenshtein_distance(a, b) == levenshtein_distance(b, a));
        const double s = levenshtein_similarity(a, b);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("embedding similarity is the cosine of mean token vectors") {
    EmbeddingStore store(2);
    store.add("a", {1, 0});
    store.add("b", {0, 1});
    store.add("c", {-1, 0});
    CHECK(*embedding_similarity("a", "a b", store) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(*embedding_similarity("a", "c", store) == doctest::Approx(-1.0));
    CHECK_FALSE(embedding_similarity("a", "zzz", store).has_value());

    auto shared = std::make_shared<const EmbeddingStore>(store);
    const Similarity sim({}, shared);
    CHECK(sim.text("a", "c") == 0.0);  // negative cosine clamps
    CHECK(sim.text("a", "a b") == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(sim.text("ab", "abc") == doctest::Approx(levenshtein_similarity("ab", "abc")));  // out of vocabulary

    SimilarityConfig edit_only;
    edit_only.use_embeddings = false;
    CHECK(Similarity(edit_only, shared).text("a", "c") == 0.0);
    CHECK(Similarity(edit_only, shared).text("a", "a b") == doctest::Approx(levenshtein_similarity("a", "a b")));
}

TEST_CASE("embedding file parsing") {
    std::istringstream ok("2 3\nfoo 1 0 0\nbar 0 1 0\n");
    const auto s = EmbeddingStore::parse(ok);
    CHECK(s.size() == 2);
    CHECK(s.dimension() == 3);
    std::istringstream bad("1 3\nfoo 1 0\n");
    CHECK_THROWS(EmbeddingStore::parse(bad));
}

TEST_CASE("attribute and record similarity") {
    const auto d = support::cricket();
    const Similarity sim;
    const AttributeValue none;
    CHECK(sim.attribute(none, AttributeValue::number(3)) == 0.0001);
    CHECK(sim.attribute(none, none, 0.0) == 0.0);
    CHECK(sim.attribute(AttributeValue::text("1"), AttributeValue::number(1)) == 0.0);
    // r6 / r10: only the names differ
    CHECK(sim.records(d.records[5], d.records[9]) ==
          doctest::Approx(3.0 + sim.text("Yuvraj Singh", "Y Singh")).epsilon(1e-12));
    CHECK(sim.query_record(d.queries[0], d.records[3]) == doctest::Approx(2.0002).epsilon(1e-12));
    CHECK_THROWS_AS(Similarity(SimilarityConfig{0.01, true}), Error);
}

TEST_CASE("pair table overrides symmetrically") {
    Similarity sim;
    PairTable t;
    t.set("x", "y", 0.25);
    sim.set_text_override(t);
    CHECK(sim.text("x", "y") == 0.25);
    CHECK(sim.text("y", "x") == 0.25);
    CHECK(sim.text("x", "x") == 1.0);
}

TEST_CASE("source similarity matrix matches a brute-force oracle") {
    const auto d = support::cricket();
    const auto sim = support::cricket_similarity();
    const auto m = build_source_similarity_matrix(d, sim);
    const auto src = d.record_source_indices();
    const double arity = static_cast<double>(d.schema.size());
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            double total = 0, count = 0;
            for (std::size_t a = 0; a < d.records.size(); ++a) {
                if (src[a] != i) continue;
                double best = 0;
                for (std::size_t b = 0; b < d.records.size(); ++b)
                    if (src[b] == j) best = std::max(best, sim.records(d.records[a], d.records[b]) / arity);
                total += best;
                count += 1;
            }
            CHECK(m(i, j) == doctest::Approx(total / count).epsilon(1e-12));
        }
    }
    CHECK(m(0, 3) != m(3, 0));  // asymmetric

    for (unsigned threads : {1u, 2u, 3u, 8u}) CHECK(build_source_similarity_matrix(d, sim, {threads}) == m);

    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream in(out.str());
    CHECK(read_matrix(in) == m);
}

TEST_CASE("trust and ratings") {
    SUBCASE("ties go to the lowest index") {
        const SourceSimilarityMatrix m({"a", "b"}, {1.0, 0.5, 0.5, 1.0});
        const auto t = trustworthiness_scores(m);
        CHECK(t.mts_index == 0);
        CHECK(t.trust == std::vector<double>{1.0, 0.5});
    }
    SUBCASE("uniform ratings") {
        const auto r = uniform_ratings(3);
        CHECK(r.ratings == std::vector<double>{1.0, 1.0, 1.0});
        CHECK(r.index_of_maximum == 0);
    }
    SUBCASE("biased ratings scale by the bias column") {
        const SourceSimilarityMatrix m({"a", "b", "c"}, {1.0, 0.2, 0.3, 0.6, 1.0, 0.1, 0.9, 0.4, 1.0});
        const auto r = source_ratings(m, "b", 3.0);
        CHECK(r.ratings[0] == doctest::Approx(0.6));
        CHECK(r.ratings[1] == doctest::Approx(3.0));
        CHECK(r.ratings[2] == doctest::Approx(1.2));
        CHECK(r.index_of_maximum == 1);
        CHECK_THROWS(source_ratings(m, "zz", 1.0));
    }
}
