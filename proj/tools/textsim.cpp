// textsim: score, classify and analyze text-pair corpora with the
// classic and semantically-informed similarity/distance measures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "textsim/classify.hpp"
#include "textsim/corpus.hpp"
#include "textsim/error.hpp"
#include "textsim/eval.hpp"
#include "textsim/measures.hpp"
#include "textsim/wordsim.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string corpus_path;
    std::string format = "pairs-tsv";
    std::string backend = "exact";
    std::string vectors_path;
    std::string taxonomy_path;
    std::string method = "sj";
    std::string model_path;
    std::string out_path;
    std::string report = "json";
    std::string oov = "exact-fallback";
    std::string softmatch_rounds = "1";
    std::string objective = "macro-f1";
    std::string category_thresholds = "retune";
    std::string tau_synset;
    std::size_t tau_topk = 100;
    int folds = 10;
    unsigned seed = 42;
    int max_depth = 3;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    bool keep_case = false;
};

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

textsim::TokenizerOptions tokenizer_options(const Options& opts) {
    textsim::TokenizerOptions t;
    t.fold_case = !opts.keep_case;
    return t;
}

textsim::Corpus load(const Options& opts) {
    auto corpus = textsim::load_corpus(opts.corpus_path,
                                       textsim::corpus_format_from_string(opts.format),
                                       tokenizer_options(opts));
    std::ostringstream counts;
    counts << "corpus " << opts.corpus_path << ": " << corpus.pairs.size() << " pairs, "
           << corpus.positive_count() << " plagiarism, " << corpus.negative_count()
           << " not-plagiarism";
    if (corpus.has_categories()) {
        counts << " (";
        bool first = true;
        for (const auto& [category, count] : corpus.category_counts()) {
            if (category == textsim::ParaphraseCategory::Unlabeled) continue;
            if (!first) counts << ", ";
            counts << to_string(category) << " " << count;
            first = false;
        }
        counts << ")";
    }
    std::cerr << counts.str() << "\n";
    return corpus;
}

std::unique_ptr<textsim::SimilarityBackend> make_backend(const Options& opts,
                                                         const std::string& command) {
    const auto policy = textsim::oov_policy_from_string(opts.oov);
    if (opts.backend == "exact") return std::make_unique<textsim::ExactMatchBackend>();
    if (opts.backend == "embedding") {
        if (opts.vectors_path.empty())
            throw textsim::Error(command + ": --vectors is required with --backend embedding");
        return std::make_unique<textsim::EmbeddingBackend>(
            textsim::load_embeddings(opts.vectors_path), policy, opts.tau_topk);
    }
    if (opts.backend == "wup") {
        if (opts.taxonomy_path.empty())
            throw textsim::Error(command + ": --taxonomy is required with --backend wup");
        std::optional<std::string> tau;
        if (!opts.tau_synset.empty()) tau = opts.tau_synset;
        return std::make_unique<textsim::TaxonomyBackend>(
            textsim::load_taxonomy(opts.taxonomy_path), policy, tau);
    }
    throw textsim::Error("unknown backend '" + opts.backend + "'");
}

textsim::MeasureOptions measure_options(const Options& opts) {
    textsim::MeasureOptions m;
    m.rounds = textsim::softmatch_rounds_from_string(opts.softmatch_rounds);
    return m;
}

// The semantic part of the run configuration, echoed into every JSON
// output; the seed is always written out explicitly.
json config_json(const Options& opts, const std::string& command) {
    json c;
    c["command"] = command;
    c["corpus"] = opts.corpus_path;
    c["format"] = opts.format;
    c["backend"] = opts.backend;
    c["oov"] = opts.oov;
    c["softmatch_rounds"] = opts.softmatch_rounds;
    c["seed"] = opts.seed;
    if (opts.backend == "embedding") {
        c["vectors"] = opts.vectors_path;
        c["tau_topk"] = opts.tau_topk;
    }
    if (opts.backend == "wup") {
        c["taxonomy"] = opts.taxonomy_path;
        if (!opts.tau_synset.empty()) c["tau_synset"] = opts.tau_synset;
    }
    if (command == "evaluate" || command == "tune") {
        c["method"] = opts.method;
        c["objective"] = opts.objective;
        if (opts.method == "combined") c["max_depth"] = opts.max_depth;
    }
    if (command == "evaluate") {
        c["folds"] = opts.folds;
        c["category_thresholds"] = opts.category_thresholds;
    }
    if (command == "apply") c["model"] = opts.model_path;
    return c;
}

void write_output(const Options& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw textsim::Error("cannot write output file '" + opts.out_path + "'");
    out << text;
    if (!out) throw textsim::Error("failed writing output file '" + opts.out_path + "'");
}

int cmd_score(const Options& opts) {
    const auto corpus = load(opts);
    const auto backend = make_backend(opts, "score");
    const auto scores =
        textsim::score_corpus(corpus, *backend, measure_options(opts), opts.jobs);

    if (opts.report == "json") {
        json out;
        out["config"] = config_json(opts, "score");
        json rows = json::array();
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
            json row;
            row["id"] = corpus.pairs[i].id;
            row["j"] = scores[i].j;
            row["sj"] = scores[i].sj;
            row["ed"] = scores[i].ed;
            row["sed"] = scores[i].sed;
            rows.push_back(row);
        }
        out["pairs"] = rows;
        write_output(opts, out.dump(2) + "\n");
    } else {
        std::ostringstream table;
        table << "id\tj\tsj\ted\tsed\n";
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i)
            table << corpus.pairs[i].id << '\t' << fmt(scores[i].j) << '\t' << fmt(scores[i].sj)
                  << '\t' << fmt(scores[i].ed) << '\t' << fmt(scores[i].sed) << '\n';
        write_output(opts, table.str());
    }
    return 0;
}

textsim::EvalConfig eval_config(const Options& opts) {
    textsim::EvalConfig config;
    config.method = textsim::method_from_string(opts.method);
    config.folds = opts.folds;
    config.seed = opts.seed;
    config.tree_depth = opts.max_depth;
    config.objective = textsim::tune_objective_from_string(opts.objective);
    config.category_tuning = textsim::category_tuning_from_string(opts.category_thresholds);
    config.measures = measure_options(opts);
    config.jobs = opts.jobs;
    return config;
}

int cmd_evaluate(const Options& opts) {
    const auto corpus = load(opts);
    const auto backend = make_backend(opts, "evaluate");
    const auto report = textsim::cross_validate(corpus, *backend, eval_config(opts));

    if (opts.report == "json") {
        json out = textsim::report_to_json(report);
        out["config"] = config_json(opts, "evaluate");
        write_output(opts, out.dump(2) + "\n");
    } else {
        std::ostringstream table;
        table << "method\t" << opts.method << "\n";
        table << "macro_f1\t" << fmt(report.macro_f1) << "\n";
        for (const auto& [label, f1] : report.per_class_f1)
            table << "f1[" << to_string(label) << "]\t" << fmt(f1) << "\n";
        table << "confusion\ttp=" << report.confusion.tp << " fp=" << report.confusion.fp
              << " tn=" << report.confusion.tn << " fn=" << report.confusion.fn << "\n";
        if (!report.per_category.empty()) {
            table << "\ncategory\tmacro_f1\n";
            for (const auto& [category, f1] : report.per_category)
                table << to_string(category) << '\t' << fmt(f1) << "\n";
        }
        write_output(opts, table.str());
    }
    std::cout << "macro_f1 " << fmt(report.macro_f1) << "\n";
    return 0;
}

int cmd_complexity(const Options& opts) {
    const auto corpus = load(opts);
    const double lc = textsim::lexical_concordance(corpus);

    std::map<textsim::ParaphraseCategory, double> per_category;
    if (corpus.has_categories()) {
        for (const auto& pair : corpus.pairs) {
            if (pair.label != textsim::Label::Plagiarism ||
                pair.category == textsim::ParaphraseCategory::Unlabeled ||
                per_category.count(pair.category))
                continue;
            per_category[pair.category] =
                textsim::lexical_concordance_category(corpus, pair.category);
        }
    }

    if (opts.report == "json") {
        json out;
        out["config"] = config_json(opts, "complexity");
        out["lexical_concordance"] = lc;
        if (!per_category.empty()) {
            json cats;
            for (const auto& [category, value] : per_category)
                cats[to_string(category)] = value;
            out["per_category"] = cats;
        }
        write_output(opts, out.dump(2) + "\n");
    } else {
        std::ostringstream table;
        table << "corpus\tlc\n" << corpus.name << '\t' << fmt(lc) << "\n";
        if (!per_category.empty()) {
            table << "\nparaphrase_type\tlc\n";
            for (const auto& [category, value] : per_category)
                table << to_string(category) << '\t' << fmt(value) << "\n";
        }
        write_output(opts, table.str());
    }
    return 0;
}

int cmd_tune(const Options& opts) {
    const auto corpus = load(opts);
    const auto backend = make_backend(opts, "tune");
    const auto scores =
        textsim::score_corpus(corpus, *backend, measure_options(opts), opts.jobs);
    const auto method = textsim::method_from_string(opts.method);
    const auto objective = textsim::tune_objective_from_string(opts.objective);

    textsim::TrainedClassifier clf;
    if (method == textsim::Method::Combined) {
        std::vector<std::pair<std::vector<double>, textsim::Label>> data;
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i)
            data.emplace_back(std::vector<double>{scores[i].sj, scores[i].sed},
                              corpus.pairs[i].label);
        clf = textsim::train_tree(data, {"sj", "sed"}, opts.max_depth);
    } else {
        const bool high = method == textsim::Method::J || method == textsim::Method::SJ;
        const std::string feature = to_string(method);
        std::vector<std::pair<double, textsim::Label>> data;
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i)
            data.emplace_back(textsim::feature_value(scores[i], feature),
                              corpus.pairs[i].label);
        clf = textsim::tune_threshold(
            feature, data,
            high ? textsim::Polarity::HighIsPositive : textsim::Polarity::LowIsPositive,
            objective);
    }

    json out;
    out["config"] = config_json(opts, "tune");
    out["classifier"] = textsim::classifier_to_json(clf);
    write_output(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_apply(const Options& opts) {
    std::ifstream model_in(opts.model_path);
    if (!model_in) throw textsim::Error("cannot open model file '" + opts.model_path + "'");
    json model_json;
    try {
        model_in >> model_json;
    } catch (const json::exception& e) {
        throw textsim::Error("model file '" + opts.model_path + "': " + e.what());
    }
    const json clf_json =
        model_json.contains("classifier") ? model_json.at("classifier") : model_json;
    const auto clf = textsim::classifier_from_json(clf_json);

    const auto corpus = load(opts);
    const auto backend = make_backend(opts, "apply");
    const auto scores =
        textsim::score_corpus(corpus, *backend, measure_options(opts), opts.jobs);

    std::vector<textsim::Label> predictions;
    predictions.reserve(corpus.pairs.size());
    for (const auto& s : scores) {
        if (const auto* threshold = std::get_if<textsim::ThresholdClassifier>(&clf)) {
            predictions.push_back(textsim::classify_threshold(*threshold, s));
        } else {
            const auto& tree = std::get<textsim::DecisionTree>(clf);
            std::vector<double> row;
            row.reserve(tree.features.size());
            for (const auto& feature : tree.features)
                row.push_back(textsim::feature_value(s, feature));
            predictions.push_back(textsim::classify_tree(tree, row));
        }
    }

    if (opts.report == "json") {
        json out;
        out["config"] = config_json(opts, "apply");
        json rows = json::array();
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
            json row;
            row["id"] = corpus.pairs[i].id;
            row["label"] = to_string(predictions[i]);
            rows.push_back(row);
        }
        out["predictions"] = rows;
        write_output(opts, out.dump(2) + "\n");
    } else {
        std::ostringstream table;
        table << "id\tlabel\n";
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i)
            table << corpus.pairs[i].id << '\t' << to_string(predictions[i]) << '\n';
        write_output(opts, table.str());
    }
    return 0;
}

int cmd_coverage(const Options& opts) {
    const auto corpus = load(opts);
    const auto backend = make_backend(opts, "coverage");
    const double value = textsim::coverage(*backend, corpus);

    if (opts.report == "json") {
        json out;
        out["config"] = config_json(opts, "coverage");
        out["coverage"] = value;
        write_output(opts, out.dump(2) + "\n");
    } else {
        write_output(opts, "coverage\t" + fmt(value) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantically-informed text similarity measures and evaluation"};
    app.require_subcommand(1);

    Options opts;

    const auto add_common = [&opts](CLI::App* cmd, bool with_backend = true) {
        cmd->add_option("--corpus", opts.corpus_path, "corpus file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--format", opts.format, "corpus format")
            ->check(CLI::IsMember({"pairs-tsv", "msrp-tsv"}));
        cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
        cmd->add_option("--report", opts.report, "output format")
            ->check(CLI::IsMember({"json", "table"}));
        cmd->add_flag("--keep-case", opts.keep_case, "skip case folding");
        cmd->add_option("--seed", opts.seed, "random seed");
        if (with_backend) {
            cmd->add_option("--backend", opts.backend, "word similarity backend")
                ->check(CLI::IsMember({"exact", "embedding", "wup"}));
            cmd->add_option("--vectors", opts.vectors_path, "word vector file")
                ->check(CLI::ExistingFile);
            cmd->add_option("--taxonomy", opts.taxonomy_path, "taxonomy file")
                ->check(CLI::ExistingFile);
            cmd->add_option("--tau-topk", opts.tau_topk,
                            "embedding tau: centroid of the K most frequent words");
            cmd->add_option("--tau-synset", opts.tau_synset, "taxonomy tau synset id");
            cmd->add_option("--oov", opts.oov, "out-of-vocabulary similarity policy")
                ->check(CLI::IsMember({"exact-fallback", "zero"}));
            cmd->add_option("--softmatch-rounds", opts.softmatch_rounds,
                            "soft matching rounds")
                ->check(CLI::IsMember({"1", "iterate"}));
            cmd->add_option("--jobs", opts.jobs, "scoring threads")
                ->check(CLI::PositiveNumber);
        }
    };
    const auto add_method = [&opts](CLI::App* cmd) {
        cmd->add_option("--method", opts.method, "measure to classify with")
            ->check(CLI::IsMember({"j", "sj", "ed", "sed", "combined"}));
        cmd->add_option("--max-depth", opts.max_depth, "decision tree depth cap")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--objective", opts.objective, "tuning objective")
            ->check(CLI::IsMember({"macro-f1", "accuracy"}));
    };

    auto* score = app.add_subcommand("score", "compute J, SJ, ED, SED per pair");
    add_common(score);

    auto* evaluate = app.add_subcommand("evaluate", "cross-validated classification report");
    add_common(evaluate);
    add_method(evaluate);
    evaluate->add_option("--folds", opts.folds, "number of folds")->check(CLI::PositiveNumber);
    evaluate->add_option("--category-thresholds", opts.category_thresholds,
                         "per-category tuning mode")
        ->check(CLI::IsMember({"retune", "global"}));

    auto* complexity = app.add_subcommand("complexity", "lexical concordance of a corpus");
    add_common(complexity, /*with_backend=*/false);

    auto* tune = app.add_subcommand("tune", "fit a classifier on the whole corpus");
    add_common(tune);
    add_method(tune);

    auto* apply = app.add_subcommand("apply", "predict labels with a stored classifier");
    add_common(apply);
    apply->add_option("--model", opts.model_path, "classifier JSON from tune")
        ->required()
        ->check(CLI::ExistingFile);

    auto* coverage = app.add_subcommand("coverage", "backend vocabulary coverage");
    add_common(coverage);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (score->parsed()) return cmd_score(opts);
        if (evaluate->parsed()) return cmd_evaluate(opts);
        if (complexity->parsed()) return cmd_complexity(opts);
        if (tune->parsed()) return cmd_tune(opts);
        if (apply->parsed()) return cmd_apply(opts);
        if (coverage->parsed()) return cmd_coverage(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
