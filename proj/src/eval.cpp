#include "textsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "textsim/error.hpp"

namespace textsim {

namespace {

// Fisher-Yates with explicit index draws; std::shuffle's draw sequence is
// implementation-defined, this is not.
void deterministic_shuffle(std::vector<std::size_t>& items, std::mt19937& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

// Stratified fold assignment over labels; indices refer to positions in
// `labels`.
std::vector<int> assign_folds(const std::vector<Label>& labels, int k, std::uint32_t seed) {
    if (k < 2) throw Error("make_folds: k must be at least 2");
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == Label::Plagiarism ? positives : negatives).push_back(i);
    if (static_cast<std::size_t>(k) > positives.size() ||
        static_cast<std::size_t>(k) > negatives.size())
        throw Error("make_folds: k = " + std::to_string(k) +
                    " exceeds a class size (positives " + std::to_string(positives.size()) +
                    ", negatives " + std::to_string(negatives.size()) + ")");

    std::mt19937 rng(seed);
    deterministic_shuffle(positives, rng);
    deterministic_shuffle(negatives, rng);

    std::vector<int> folds(labels.size(), -1);
    for (std::size_t i = 0; i < positives.size(); ++i)
        folds[positives[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < negatives.size(); ++i)
        folds[negatives[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return folds;
}

std::pair<std::string, Polarity> method_feature(Method method) {
    switch (method) {
        case Method::J: return {"j", Polarity::HighIsPositive};
        case Method::SJ: return {"sj", Polarity::HighIsPositive};
        case Method::ED: return {"ed", Polarity::LowIsPositive};
        case Method::SED: return {"sed", Polarity::LowIsPositive};
        case Method::Combined: break;
    }
    throw Error("method has no single feature");
}

std::vector<double> combined_features(const PairScores& scores) {
    return {scores.sj, scores.sed};
}

struct CvOutcome {
    std::vector<Label> predictions;
    std::vector<TrainedClassifier> fold_classifiers;
};

// The CV core: fold, tune on each training split, predict its held-out
// split. labels/scores are parallel arrays.
CvOutcome run_cv(const std::vector<Label>& labels, const std::vector<PairScores>& scores,
                 Method method, int k, std::uint32_t seed, int tree_depth,
                 TuneObjective objective) {
    const std::vector<int> folds = assign_folds(labels, k, seed);
    CvOutcome outcome;
    outcome.predictions.assign(labels.size(), Label::NotPlagiarism);
    for (int fold = 0; fold < k; ++fold) {
        if (method == Method::Combined) {
            std::vector<std::pair<std::vector<double>, Label>> train;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (folds[i] != fold) train.emplace_back(combined_features(scores[i]), labels[i]);
            const DecisionTree tree = train_tree(train, {"sj", "sed"}, tree_depth);
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (folds[i] == fold)
                    outcome.predictions[i] = classify_tree(tree, combined_features(scores[i]));
            outcome.fold_classifiers.emplace_back(tree);
        } else {
            const auto [feature, polarity] = method_feature(method);
            std::vector<std::pair<double, Label>> train;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (folds[i] != fold)
                    train.emplace_back(feature_value(scores[i], feature), labels[i]);
            const ThresholdClassifier clf = tune_threshold(feature, train, polarity, objective);
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (folds[i] == fold) outcome.predictions[i] = classify_threshold(clf, scores[i]);
            outcome.fold_classifiers.emplace_back(clf);
        }
    }
    return outcome;
}

}  // namespace

void ConfusionCounts::add(Label gold, Label predicted) {
    if (gold == Label::Plagiarism)
        predicted == Label::Plagiarism ? ++tp : ++fn;
    else
        predicted == Label::Plagiarism ? ++fp : ++tn;
}

double class_f1(const ConfusionCounts& confusion, Label cls) {
    double correct, predicted_total, gold_total;
    if (cls == Label::Plagiarism) {
        correct = static_cast<double>(confusion.tp);
        predicted_total = static_cast<double>(confusion.tp + confusion.fp);
        gold_total = static_cast<double>(confusion.tp + confusion.fn);
    } else {
        correct = static_cast<double>(confusion.tn);
        predicted_total = static_cast<double>(confusion.tn + confusion.fn);
        gold_total = static_cast<double>(confusion.tn + confusion.fp);
    }
    const double precision = predicted_total > 0.0 ? correct / predicted_total : 0.0;
    const double recall = gold_total > 0.0 ? correct / gold_total : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double macro_f1(const ConfusionCounts& confusion) {
    if (confusion.total() == 0) throw Error("macro_f1: no instances evaluated");
    return (class_f1(confusion, Label::Plagiarism) +
            class_f1(confusion, Label::NotPlagiarism)) /
           2.0;
}

Method method_from_string(const std::string& s) {
    if (s == "j") return Method::J;
    if (s == "sj") return Method::SJ;
    if (s == "ed") return Method::ED;
    if (s == "sed") return Method::SED;
    if (s == "combined") return Method::Combined;
    throw Error("unknown method '" + s + "'");
}

std::string to_string(Method method) {
    switch (method) {
        case Method::J: return "j";
        case Method::SJ: return "sj";
        case Method::ED: return "ed";
        case Method::SED: return "sed";
        case Method::Combined: return "combined";
    }
    return "?";
}

CategoryTuning category_tuning_from_string(const std::string& s) {
    if (s == "retune") return CategoryTuning::Retune;
    if (s == "global") return CategoryTuning::Global;
    throw Error("unknown category tuning mode '" + s + "'");
}

FoldPlan make_folds(const Corpus& corpus, int k, std::uint32_t seed) {
    std::vector<Label> labels;
    labels.reserve(corpus.pairs.size());
    for (const auto& pair : corpus.pairs) labels.push_back(pair.label);
    const std::vector<int> folds = assign_folds(labels, k, seed);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    for (std::size_t i = 0; i < corpus.pairs.size(); ++i)
        plan.assignments[corpus.pairs[i].id] = folds[i];
    return plan;
}

EvalReport cross_validate(const Corpus& corpus, const SimilarityBackend& backend,
                          const EvalConfig& config) {
    const std::vector<PairScores> scores =
        score_corpus(corpus, backend, config.measures, config.jobs);
    std::vector<Label> labels;
    labels.reserve(corpus.pairs.size());
    for (const auto& pair : corpus.pairs) labels.push_back(pair.label);

    const CvOutcome outcome = run_cv(labels, scores, config.method, config.folds, config.seed,
                                     config.tree_depth, config.objective);

    EvalReport report;
    report.fold_count = config.folds;
    report.fold_classifiers = outcome.fold_classifiers;
    for (std::size_t i = 0; i < labels.size(); ++i)
        report.confusion.add(labels[i], outcome.predictions[i]);
    report.macro_f1 = macro_f1(report.confusion);
    report.per_class_f1[Label::Plagiarism] = class_f1(report.confusion, Label::Plagiarism);
    report.per_class_f1[Label::NotPlagiarism] =
        class_f1(report.confusion, Label::NotPlagiarism);

    if (corpus.has_categories()) {
        // every category's positives are evaluated against all negatives
        std::map<ParaphraseCategory, std::vector<std::size_t>> by_category;
        std::vector<std::size_t> negative_indices;
        for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
            if (labels[i] == Label::Plagiarism)
                by_category[corpus.pairs[i].category].push_back(i);
            else
                negative_indices.push_back(i);
        }
        for (const auto& [category, positive_indices] : by_category) {
            std::vector<std::size_t> view;
            view.reserve(positive_indices.size() + negative_indices.size());
            for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
                const bool positive_of_category =
                    labels[i] == Label::Plagiarism && corpus.pairs[i].category == category;
                if (positive_of_category || labels[i] == Label::NotPlagiarism)
                    view.push_back(i);
            }
            if (config.category_tuning == CategoryTuning::Global) {
                ConfusionCounts confusion;
                for (const auto i : view) confusion.add(labels[i], outcome.predictions[i]);
                report.per_category[category] = macro_f1(confusion);
            } else {
                const int sub_k = static_cast<int>(
                    std::min<std::size_t>(static_cast<std::size_t>(config.folds),
                                          std::min(positive_indices.size(),
                                                   negative_indices.size())));
                if (sub_k < 2) continue;  // too few instances to fold
                std::vector<Label> sub_labels;
                std::vector<PairScores> sub_scores;
                for (const auto i : view) {
                    sub_labels.push_back(labels[i]);
                    sub_scores.push_back(scores[i]);
                }
                const CvOutcome sub =
                    run_cv(sub_labels, sub_scores, config.method, sub_k, config.seed,
                           config.tree_depth, config.objective);
                ConfusionCounts confusion;
                for (std::size_t i = 0; i < sub_labels.size(); ++i)
                    confusion.add(sub_labels[i], sub.predictions[i]);
                report.per_category[category] = macro_f1(confusion);
            }
        }
    }
    return report;
}

double overlap_sum(const std::vector<TextPair>& pairs) {
    double sum = 0.0;
    for (const auto& pair : pairs) sum += jaccard(pair.source, pair.suspicious);
    return sum;
}

namespace {

double lc_over(const Corpus& corpus, ParaphraseCategory category, bool restrict_category) {
    if (corpus.pairs.empty()) throw Error("lexical_concordance: empty corpus");
    double overlap_pos = 0.0;
    double overlap_neg = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    for (const auto& pair : corpus.pairs) {
        if (pair.label == Label::Plagiarism) {
            if (restrict_category && pair.category != category) continue;
            overlap_pos += jaccard(pair.source, pair.suspicious);
            ++n_pos;
        } else {
            overlap_neg += jaccard(pair.source, pair.suspicious);
            ++n_neg;
        }
    }
    const std::size_t total = n_pos + n_neg;
    if (total == 0) throw Error("lexical_concordance: no instances selected");
    return (static_cast<double>(n_neg) - overlap_neg + overlap_pos) /
           static_cast<double>(total);
}

}  // namespace

double lexical_concordance(const Corpus& corpus) {
    return lc_over(corpus, ParaphraseCategory::Unlabeled, false);
}

double lexical_concordance_category(const Corpus& corpus, ParaphraseCategory category) {
    return lc_over(corpus, category, true);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error("spearman: sequence lengths differ");
    if (xs.size() < 2) throw Error("spearman: need at least two points");
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mean = (n + 1.0) / 2.0;  // ranks always average to this
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error("spearman: constant sequence has no rank correlation");
    return sxy / std::sqrt(sxx * syy);
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["macro_f1"] = report.macro_f1;
    j["fold_count"] = report.fold_count;
    nlohmann::json per_class;
    for (const auto& [label, f1] : report.per_class_f1) per_class[to_string(label)] = f1;
    j["per_class_f1"] = per_class;
    nlohmann::json confusion;
    confusion["tp"] = report.confusion.tp;
    confusion["fp"] = report.confusion.fp;
    confusion["tn"] = report.confusion.tn;
    confusion["fn"] = report.confusion.fn;
    j["confusion"] = confusion;
    if (!report.per_category.empty()) {
        nlohmann::json per_category;
        for (const auto& [category, f1] : report.per_category)
            per_category[to_string(category)] = f1;
        j["per_category"] = per_category;
    }
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& clf : report.fold_classifiers) folds.push_back(classifier_to_json(clf));
    j["folds"] = folds;
    return j;
}

}  // namespace textsim
