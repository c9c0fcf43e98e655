#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "textsim/classify.hpp"
#include "textsim/corpus.hpp"
#include "textsim/measures.hpp"

namespace textsim {

/// Binary confusion counts with Plagiarism as the positive class.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    void add(Label gold, Label predicted);
};

/// Per-class F1 = 2PR/(P+R), 0 when P+R is 0.
double class_f1(const ConfusionCounts& confusion, Label cls);

/// Unweighted mean of the two per-class F1 values. Throws Error when no
/// instances were evaluated.
double macro_f1(const ConfusionCounts& confusion);

/// Which measure drives classification; Combined trains a decision tree
/// on the (sj, sed) feature pair.
enum class Method { J, SJ, ED, SED, Combined };

Method method_from_string(const std::string& s);
std::string to_string(Method method);

/// Per-category evaluation mode: Retune reruns cross-validation on each
/// category's positives plus all negatives; Global reuses the pooled
/// global predictions restricted the same way.
enum class CategoryTuning { Retune, Global };

CategoryTuning category_tuning_from_string(const std::string& s);

struct FoldPlan {
    int k = 0;
    std::uint32_t seed = 0;
    std::map<std::string, int> assignments;  // pair id -> fold index
};

/// Deterministic stratified fold assignment: each class is shuffled with
/// the seeded generator and dealt round-robin, so every fold's positive
/// count is within one of an even share. Throws Error when k < 2 or k
/// exceeds the size of either class.
FoldPlan make_folds(const Corpus& corpus, int k, std::uint32_t seed);

struct EvalConfig {
    Method method = Method::SJ;
    int folds = 10;
    std::uint32_t seed = 42;
    int tree_depth = 3;
    TuneObjective objective = TuneObjective::MacroF1;
    CategoryTuning category_tuning = CategoryTuning::Retune;
    MeasureOptions measures;
    int jobs = 1;
};

struct EvalReport {
    double macro_f1 = 0.0;
    std::map<Label, double> per_class_f1;
    std::map<ParaphraseCategory, double> per_category;  // macro-F1 per category
    ConfusionCounts confusion;
    std::vector<TrainedClassifier> fold_classifiers;  // parameters per fold
    int fold_count = 0;
};

/// Stratified k-fold cross-validation: per fold, the classifier for the
/// selected method is tuned on the training split only and applied to
/// the held-out split; all held-out predictions are pooled into one
/// report. Per-category rows evaluate each category's positives against
/// all negatives.
EvalReport cross_validate(const Corpus& corpus, const SimilarityBackend& backend,
                          const EvalConfig& config);

/// Sum of the Jaccard coefficients of the given pairs (each instance's
/// own source/suspicious pair).
double overlap_sum(const std::vector<TextPair>& pairs);

/// Lexical concordance of a labeled corpus,
///   (|C_neg| - O(C_neg) + O(C_pos)) / |C|,
/// in [0,1]. Near 1 the corpus is easy (verbatim positives, unrelated
/// negatives); near 0 it is hard.
double lexical_concordance(const Corpus& corpus);

/// Lexical concordance restricted to one category's positives plus all
/// negatives.
double lexical_concordance_category(const Corpus& corpus, ParaphraseCategory category);

/// Spearman rank correlation with average ranks for ties. Throws Error
/// on length mismatch, fewer than two points, or a constant sequence.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

/// Stable-key JSON form of a report (fold classifiers included).
nlohmann::json report_to_json(const EvalReport& report);

}  // namespace textsim
