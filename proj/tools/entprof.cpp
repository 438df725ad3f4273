#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "entprof/corrupt.hpp"
#include "entprof/features.hpp"
#include "entprof/io.hpp"
#include "entprof/metrics.hpp"
#include "entprof/pipeline.hpp"
#include "entprof/profile.hpp"
#include "entprof/synthetic.hpp"

namespace fs = std::filesystem;
using namespace entprof;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct Options {
    std::string records, queries, truth, embeddings, schema, matrix, model, entities;
    std::string classifier = "forest";
    std::size_t trees = 10, k = 5;
    std::string biased_source;
    double bias_value = 1.0;
    bool uniform = false;
    double classifier_split = 0.8, query_split = 0.7;
    std::uint64_t seed = 0;
    std::string out;
    bool oracle = false;
    bool keep_query_values = false;
    double error_rate = 0.0, ambiguity_rate = 0.0;
    std::size_t filled = 3, synthetic = 0;
    std::string name_attribute;
    std::vector<std::string> reports;
};

void require_file(const std::string& flag, const std::string& path) {
    if (path.empty()) throw ValidationError(flag + " is required");
    if (!fs::is_regular_file(path)) throw ValidationError(flag + ": no such file '" + path + "'");
}

fs::path out_dir(const Options& o) {
    if (o.out.empty()) throw ValidationError("--out is required");
    fs::create_directories(o.out);
    return o.out;
}

std::string to_text(const auto& writer) {
    std::ostringstream s;
    writer(s);
    return s.str();
}

Dataset load(const Options& o, bool queries, bool truth) {
    require_file("--schema", o.schema);
    require_file("--records", o.records);
    if (queries) require_file("--queries", o.queries);
    if (truth) require_file("--truth", o.truth);
    auto d = load_dataset(o.schema, o.records, queries ? o.queries : "", truth ? o.truth : "");
    const auto violations = validate(d);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << v.where << ": " << v.message << "\n";
        throw ValidationError(std::to_string(violations.size()) + " validation problem(s)");
    }
    return d;
}

Similarity make_similarity(const Options& o) {
    std::shared_ptr<const EmbeddingStore> store;
    if (!o.embeddings.empty()) {
        require_file("--embeddings", o.embeddings);
        store = std::make_shared<const EmbeddingStore>(EmbeddingStore::load(o.embeddings));
    }
    return Similarity(SimilarityConfig{}, store);
}

SourceSimilarityMatrix matrix_for(const Options& o, const Dataset& d, const Similarity& sim) {
    if (o.matrix.empty()) return build_source_similarity_matrix(d, sim);
    require_file("--matrix", o.matrix);
    std::ifstream in(o.matrix, std::ios::binary);
    auto m = read_matrix(in, o.matrix);
    if (m.source_order().size() != d.sources.size()) throw ValidationError("matrix does not cover the dataset's sources");
    for (std::size_t i = 0; i < d.sources.size(); ++i) {
        if (m.source_order()[i] != d.sources[i].source_id) {
            throw ValidationError("matrix source order differs from the dataset's");
        }
    }
    return m;
}

RunConfig run_config(const Options& o) {
    RunConfig c;
    c.classifier = parse_classifier_kind(o.classifier);
    c.hyperparameters.n_trees = o.trees;
    c.hyperparameters.k = o.k;
    c.classifier_split = o.classifier_split;
    c.query_split = o.query_split;
    if (!o.uniform) {
        if (o.biased_source.empty()) throw ValidationError("give --biased-source ID or --uniform-ratings");
        c.biased_source = o.biased_source;
        c.bias_value = o.bias_value;
    }
    c.seed = o.seed;
    c.oracle = o.oracle;
    c.profile.keep_query_values = o.keep_query_values;
    c.records_path = o.records;
    c.queries_path = o.queries;
    c.truth_path = o.truth;
    c.embeddings_path = o.embeddings;
    c.schema_path = o.schema;
    return c;
}

std::string metrics_csv(const std::vector<ClassifierMetrics>& table) {
    std::string s = "classifier,f1,cv_error_percent,roc_auc,mcc,tp,fp,tn,fn\n";
    for (const auto& m : table) {
        s += std::string(to_string(m.kind)) + "," + format_number(m.f1) + "," + format_number(m.cv_error_percent) +
             "," + format_number(m.auc) + "," + format_number(m.mcc) + "," + std::to_string(m.counts.tp) + "," +
             std::to_string(m.counts.fp) + "," + std::to_string(m.counts.tn) + "," + std::to_string(m.counts.fn) +
             "\n";
    }
    return s;
}

FeatureMatrix labeled_pairs(const Dataset& d, const Similarity& sim) {
    const auto trust = trustworthiness_scores(build_source_similarity_matrix(d, sim)).trust;
    return FeatureMatrix::from(label_pairs(d.queries, d, trust, sim));
}

int cmd_validate(const Options& o) {
    require_file("--schema", o.schema);
    require_file("--records", o.records);
    const auto d = load_dataset(o.schema, o.records, o.queries, o.truth);
    const auto violations = validate(d);
    for (const auto& v : violations) std::cerr << v.where << ": " << v.message << "\n";
    if (!violations.empty()) return kInvalid;
    std::cout << d.records.size() << " records, " << d.sources.size() << " sources, " << d.queries.size()
              << " queries, " << d.truth.size() << " truth rows: ok\n";
    return kOk;
}

int cmd_simmatrix(const Options& o) {
    const auto d = load(o, false, false);
    const auto sim = make_similarity(o);
    const auto m = build_source_similarity_matrix(d, sim);
    write_file(out_dir(o) / "matrix.csv", to_text([&](std::ostream& s) { write_matrix(s, m); }));
    return kOk;
}

int cmd_rate(const Options& o) {
    const auto d = load(o, false, false);
    const auto sim = make_similarity(o);
    const auto m = matrix_for(o, d, sim);
    const auto c = run_config(o);
    const auto trust = trustworthiness_scores(m);
    const auto ratings = make_ratings(m, c);
    const auto dir = out_dir(o);
    std::string t = "source,row_sum,trust,most_trustworthy\n";
    std::string r = "source,rating,index_of_maximum\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        t += m.source_order()[i] + "," + format_number(trust.row_sums[i]) + "," + format_number(trust.trust[i]) + "," +
             (i == trust.mts_index ? "1" : "0") + "\n";
        r += m.source_order()[i] + "," + format_number(ratings.ratings[i]) + "," +
             (i == ratings.index_of_maximum ? "1" : "0") + "\n";
    }
    write_file(dir / "trust.csv", t);
    write_file(dir / "ratings.csv", r);
    return kOk;
}

int cmd_train(const Options& o) {
    const auto d = load(o, true, false);
    const auto sim = make_similarity(o);
    const auto kind = parse_classifier_kind(o.classifier);
    Hyperparameters hp;
    hp.n_trees = o.trees;
    hp.k = o.k;
    const auto data = labeled_pairs(d, sim);
    const auto split = split_examples(data, o.classifier_split, o.seed);
    const auto model = train(kind, split.train, hp, o.seed);
    auto m = evaluate_classifier(model, split.test);
    m.cv_error_percent = cv_error(kind, data, hp, 10, o.seed);
    const auto dir = out_dir(o);
    write_file(dir / "model.json", model.serialize());
    write_file(dir / "metrics.csv", metrics_csv({m}));
    return kOk;
}

int cmd_select_model(const Options& o) {
    const auto d = load(o, true, false);
    const auto sim = make_similarity(o);
    Hyperparameters hp;
    hp.n_trees = o.trees;
    hp.k = o.k;
    const auto data = labeled_pairs(d, sim);
    const std::vector kinds = {ClassifierKind::DecisionTree, ClassifierKind::RandomForest, ClassifierKind::NaiveBayes,
                               ClassifierKind::KNearest};
    SelectionOptions opts;
    opts.train_fraction = o.classifier_split;
    const auto sel = select_model(data, kinds, hp, o.seed, opts);
    const auto split = split_examples(data, o.classifier_split, o.seed);
    const auto dir = out_dir(o);
    write_file(dir / "model.json", train(sel.best, split.train, hp, o.seed).serialize());
    write_file(dir / "metrics.csv", metrics_csv(sel.table));
    std::cout << to_string(sel.best) << "\n";
    return kOk;
}

int cmd_profile(const Options& o) {
    const auto d = load(o, true, false);
    const auto sim = make_similarity(o);
    const auto m = matrix_for(o, d, sim);
    const auto trust = trustworthiness_scores(m).trust;
    const auto ratings = make_ratings(m, run_config(o));

    std::optional<ClassifierModel> model;
    LinkPredicate link;
    if (o.oracle) {
        link = oracle_linker();
    } else {
        require_file("--model", o.model);
        std::ifstream in(o.model, std::ios::binary);
        model.emplace(ClassifierModel::deserialize(std::string(std::istreambuf_iterator<char>(in), {})));
        link = model_linker(*model);
    }
    std::vector<CompletedProfile> profiles;
    ProfileOptions opts;
    opts.keep_query_values = o.keep_query_values;
    for (const auto& q : d.queries) profiles.push_back(complete_profile(q, d, link, ratings, m, trust, sim, opts));
    const auto dir = out_dir(o);
    write_file(dir / "profiles.csv", to_text([&](std::ostream& s) { write_profiles(s, d.schema, profiles); }));
    write_file(dir / "traces.json", traces_to_json(d.schema, m, profiles));
    return kOk;
}

int cmd_evaluate(const Options& o) {
    const auto d = load(o, true, true);
    const auto sim = make_similarity(o);
    const auto result = run_pipeline(d, sim, run_config(o));
    write_file(out_dir(o) / "report.json", report_to_json(result));
    return kOk;
}

std::size_t name_index(const Options& o, const Schema& schema) {
    if (o.name_attribute.empty()) return 0;
    const auto i = schema.index_of(o.name_attribute);
    if (!i) throw ValidationError("unknown --name-attribute '" + o.name_attribute + "'");
    return *i;
}

int cmd_corrupt(const Options& o) {
    const auto dir = out_dir(o);
    if (o.synthetic > 0) {
        SyntheticSpec spec;
        spec.entities = o.synthetic;
        spec.error_rate = o.error_rate;
        spec.ambiguity_rate = o.ambiguity_rate;
        spec.filled_count = o.filled;
        spec.seed = o.seed;
        const auto b = make_synthetic_benchmark(spec);
        const auto& s = b.dataset.schema;
        write_file(dir / "schema.txt", to_text([&](std::ostream& os) { write_schema(os, s); }));
        write_file(dir / "records.csv", to_text([&](std::ostream& os) { write_records(os, s, b.dataset.records); }));
        write_file(dir / "queries.csv", to_text([&](std::ostream& os) { write_queries(os, s, b.dataset.queries); }));
        write_file(dir / "truth.csv", to_text([&](std::ostream& os) { write_truth(os, s, b.dataset.truth); }));
        write_file(dir / "entities.csv", to_text([&](std::ostream& os) { write_entities(os, s, b.entities); }));
        return kOk;
    }
    const auto d = load(o, false, false);
    CorruptionPlan plan;
    plan.error_rate = o.error_rate;
    plan.ambiguity_rate = o.ambiguity_rate;
    plan.seed = o.seed;
    plan.name_attribute = name_index(o, d.schema);
    const auto out = inject_ambiguities(inject_errors(d, plan), plan);
    write_file(dir / "records.csv", to_text([&](std::ostream& s) { write_records(s, d.schema, out.records); }));
    if (!o.entities.empty()) {
        require_file("--entities", o.entities);
        const auto q = make_queries(load_entities(o.entities, d.schema), d.schema.size(), o.filled, o.seed);
        write_file(dir / "queries.csv", to_text([&](std::ostream& s) { write_queries(s, d.schema, q.queries); }));
        write_file(dir / "truth.csv", to_text([&](std::ostream& s) { write_truth(s, d.schema, q.truth); }));
    }
    return kOk;
}

std::string slurp(const std::string& path) {
    require_file("report", path);
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int cmd_ttest(const Options& o) {
    if (o.reports.size() != 2) throw ValidationError("ttest takes exactly two report files");
    const auto text = compare_reports_json(read_report_series(slurp(o.reports[0])), read_report_series(slurp(o.reports[1])));
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_file(out_dir(o) / "ttest.json", text);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entity profile completion from multi-source records"};
    app.require_subcommand(1);
    Options o;

    auto data_flags = [&](CLI::App* c) {
        c->add_option("--schema", o.schema, "schema file (name:kind per line)");
        c->add_option("--records", o.records, "records CSV");
        c->add_option("--embeddings", o.embeddings, "token embeddings (text format)");
    };
    auto rating_flags = [&](CLI::App* c) {
        auto* b = c->add_option("--biased-source", o.biased_source, "source id to anchor ratings");
        c->add_option("--bias-value", o.bias_value, "rating of the biased source")->needs(b);
        c->add_flag("--uniform-ratings", o.uniform, "rate every source 1.0")->excludes(b);
        c->add_option("--matrix", o.matrix, "precomputed source-similarity matrix CSV");
    };
    auto model_flags = [&](CLI::App* c) {
        c->add_option("--classifier", o.classifier, "tree|forest|bayes|knn")
            ->check(CLI::IsMember({"tree", "forest", "bayes", "knn"}));
        c->add_option("--trees", o.trees, "random forest size")->check(CLI::PositiveNumber);
        c->add_option("--k", o.k, "k-NN neighbours")->check(CLI::PositiveNumber);
        c->add_option("--classifier-split", o.classifier_split, "training fraction of labeled pairs")
            ->check(CLI::Range(0.0, 1.0));
    };
    auto seed_flag = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed")->required(); };
    auto out_flag = [&](CLI::App* c) { c->add_option("--out", o.out, "output directory"); };

    auto* validate_cmd = app.add_subcommand("validate", "check input files");
    data_flags(validate_cmd);
    validate_cmd->add_option("--queries", o.queries, "queries CSV");
    validate_cmd->add_option("--truth", o.truth, "ground truth CSV");

    auto* simmatrix = app.add_subcommand("simmatrix", "write the source-similarity matrix");
    data_flags(simmatrix);
    out_flag(simmatrix);

    auto* rate = app.add_subcommand("rate", "write source trustworthiness and ratings");
    data_flags(rate);
    rating_flags(rate);
    out_flag(rate);

    auto* train_cmd = app.add_subcommand("train", "train one classifier on labeled query-record pairs");
    data_flags(train_cmd);
    train_cmd->add_option("--queries", o.queries, "queries CSV with entity_id");
    model_flags(train_cmd);
    seed_flag(train_cmd);
    out_flag(train_cmd);

    auto* select = app.add_subcommand("select-model", "compare all classifiers and keep the best");
    data_flags(select);
    select->add_option("--queries", o.queries, "queries CSV with entity_id");
    model_flags(select);
    seed_flag(select);
    out_flag(select);

    auto* profile = app.add_subcommand("profile", "complete query profiles");
    data_flags(profile);
    profile->add_option("--queries", o.queries, "queries CSV");
    rating_flags(profile);
    auto* model_opt = profile->add_option("--model", o.model, "serialized classifier");
    profile->add_flag("--oracle", o.oracle, "link records by entity_id instead of a classifier")->excludes(model_opt);
    profile->add_flag("--keep-query-values", o.keep_query_values, "never replace filled query attributes");
    out_flag(profile);

    auto* evaluate = app.add_subcommand("evaluate", "run the whole pipeline and write a report");
    data_flags(evaluate);
    evaluate->add_option("--queries", o.queries, "queries CSV with entity_id");
    evaluate->add_option("--truth", o.truth, "ground truth CSV");
    rating_flags(evaluate);
    model_flags(evaluate);
    evaluate->add_option("--query-split", o.query_split, "training fraction of queries")->check(CLI::Range(0.0, 1.0));
    evaluate->add_flag("--oracle", o.oracle, "link records by entity_id instead of a classifier");
    evaluate->add_flag("--keep-query-values", o.keep_query_values, "never replace filled query attributes");
    seed_flag(evaluate);
    out_flag(evaluate);

    auto* corrupt = app.add_subcommand("corrupt", "inject errors and ambiguities, generate queries");
    data_flags(corrupt);
    corrupt->add_option("--error-rate", o.error_rate, "fraction of cells replaced")->check(CLI::Range(0.0, 1.0));
    corrupt->add_option("--ambiguity-rate", o.ambiguity_rate, "fraction of names rewritten")
        ->check(CLI::Range(0.0, 1.0));
    corrupt->add_option("--name-attribute", o.name_attribute, "attribute rewritten by ambiguities (default: first)");
    corrupt->add_option("--entities", o.entities, "entity truth CSV; also writes queries.csv and truth.csv");
    corrupt->add_option("--filled", o.filled, "filled attributes per generated query");
    corrupt->add_option("--synthetic", o.synthetic, "generate a synthetic benchmark of N entities instead");
    seed_flag(corrupt);
    out_flag(corrupt);

    auto* ttest = app.add_subcommand("ttest", "paired t-tests between two reports");
    ttest->add_option("reports", o.reports, "two report.json files")->expected(2);
    out_flag(ttest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "validate") return cmd_validate(o);
        if (name == "simmatrix") return cmd_simmatrix(o);
        if (name == "rate") return cmd_rate(o);
        if (name == "train") return cmd_train(o);
        if (name == "select-model") return cmd_select_model(o);
        if (name == "profile") return cmd_profile(o);
        if (name == "evaluate") return cmd_evaluate(o);
        if (name == "corrupt") return cmd_corrupt(o);
        if (name == "ttest") return cmd_ttest(o);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kRuntime;
}
