#include "entprof/synthetic.hpp"

#include <array>
#include <set>

#include "entprof/corrupt.hpp"
#include "entprof/rng.hpp"

namespace entprof {

namespace {

constexpr std::array kFirstNames = {
    "Sunil",  "Kapil",   "Rahul",   "Anil",    "Virat",   "Sachin", "Yuvraj",  "Mohinder", "Lala",   "Surinder",
    "Ravi",   "Ajit",    "Javagal", "Zaheer",  "Gautam",  "Rohit",  "Shikhar", "Cheteshwar", "Ajinkya", "Murali",
    "Dilip",  "Bishan",  "Erapalli", "Syed",   "Farokh",  "Kiran",  "Navjot",  "Sourav",   "Vangipurappu", "Harbhajan",
    "Irfan",  "Wasim",   "Imran",   "Javed",   "Inzamam", "Shoaib", "Steve",   "Mark",     "Ricky",  "Allan"};
constexpr std::array kLastNames = {
    "Gavaskar", "Amarnath", "Singh",    "Dev",      "Dravid",   "Kumble",   "Kohli",   "Tendulkar", "Shastri",
    "Agarkar",  "Srinath",  "Khan",     "Gambhir",  "Sharma",   "Dhawan",   "Pujara",  "Rahane",    "Vijay",
    "Vengsarkar", "Bedi",   "Prasanna", "Kirmani",  "Engineer", "More",     "Sidhu",   "Ganguly",   "Laxman",
    "Pathan",   "Akram",    "Miandad",  "Haq",      "Akhtar",   "Waugh",    "Taylor",  "Ponting",   "Border",
    "Chappell", "Lillee",   "Hadlee",   "Botham"};
constexpr std::array kCountries = {"India",     "Pakistan", "Australia",   "England",    "New Zealand", "South Africa",
                                   "Sri Lanka", "West Indies", "Bangladesh", "Zimbabwe", "Ireland",     "Afghanistan"};

}  // namespace

Schema synthetic_schema() {
    return Schema({{"name", AttributeKind::Text},
                   {"country", AttributeKind::Text},
                   {"matches", AttributeKind::Numeric},
                   {"runs", AttributeKind::Numeric},
                   {"highest", AttributeKind::Numeric}});
}

SyntheticBenchmark make_synthetic_benchmark(const SyntheticSpec& spec) {
    if (spec.sources == 0) throw Error("benchmark needs at least one source");
    if (spec.entities > kFirstNames.size() * kLastNames.size()) throw Error("too many entities for the name pools");
    Rng rng(spec.seed);
    SyntheticBenchmark bench;
    bench.dataset.schema = synthetic_schema();

    std::set<std::string> used;
    for (std::size_t e = 0; e < spec.entities; ++e) {
        std::string name;
        do {
            name = std::string(kFirstNames[rng.index(kFirstNames.size())]) + " " +
                   kLastNames[rng.index(kLastNames.size())];
        } while (!used.insert(name).second);
        EntityTruth truth;
        truth.entity_id = "e" + std::to_string(e + 1);
        const double matches = static_cast<double>(1 + rng.index(200));
        const double runs = static_cast<double>(10 + rng.index(15991));
        const double highest = static_cast<double>(5 + rng.index(396));
        truth.values = {AttributeValue::text(name), AttributeValue::text(kCountries[rng.index(kCountries.size())]),
                        AttributeValue::number(matches), AttributeValue::number(runs), AttributeValue::number(highest)};
        bench.entities.push_back(std::move(truth));
    }

    // coverage[s][e]: source s publishes entity e; every entity has at least one publisher
    std::vector<std::vector<bool>> covers(spec.sources, std::vector<bool>(spec.entities));
    for (std::size_t e = 0; e < spec.entities; ++e) {
        bool any = false;
        for (std::size_t s = 0; s < spec.sources; ++s) {
            covers[s][e] = rng.uniform() < spec.coverage;
            any = any || covers[s][e];
        }
        if (!any) covers[rng.index(spec.sources)][e] = true;
    }

    // Corrupt each noisy source separately so clean sources stay untouched.
    std::size_t next_id = 1;
    for (std::size_t s = 0; s < spec.sources; ++s) {
        Dataset part;
        part.schema = bench.dataset.schema;
        const std::string source_id = "s" + std::to_string(s + 1);
        for (std::size_t e = 0; e < spec.entities; ++e) {
            if (!covers[s][e]) continue;
            Record r;
            r.record_id = "r" + std::to_string(next_id++);
            r.source_id = source_id;
            r.entity_id = bench.entities[e].entity_id;
            r.values = bench.entities[e].values;
            part.records.push_back(std::move(r));
        }
        if (part.records.empty()) continue;
        if (!spec.clean_sources.count(s)) {
            CorruptionPlan plan;
            plan.error_rate = spec.error_rate;
            plan.ambiguity_rate = spec.ambiguity_rate;
            plan.seed = Rng::derive(spec.seed, 100 + s);
            plan.name_attribute = 0;
            part = inject_ambiguities(inject_errors(part, plan), plan);
        }
        for (auto& r : part.records) bench.dataset.records.push_back(std::move(r));
    }
    bench.dataset.sources = group_sources(bench.dataset.records);

    auto generated = make_queries(bench.entities, bench.dataset.schema.size(), spec.filled_count,
                                  Rng::derive(spec.seed, 7));
    bench.dataset.queries = std::move(generated.queries);
    bench.dataset.truth = std::move(generated.truth);
    return bench;
}

std::vector<std::string> synthetic_vocabulary() {
    std::set<std::string> tokens;
    for (auto t : kFirstNames) tokens.emplace(t);
    for (auto t : kLastNames) tokens.emplace(t);
    for (auto c : kCountries)
        for (auto t : split_whitespace(c)) tokens.emplace(t);
    return {tokens.begin(), tokens.end()};
}

EmbeddingStore stub_embeddings(const std::vector<std::string>& tokens, std::size_t dimension, std::uint64_t seed) {
    EmbeddingStore store(dimension);
    Rng rng(seed);
    for (const auto& t : tokens) {
        std::vector<double> v(dimension);
        for (auto& x : v) x = rng.uniform(-1.0, 1.0);
        store.add(t, std::move(v));
    }
    return store;
}

}  // namespace entprof
