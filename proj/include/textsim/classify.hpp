#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "textsim/corpus.hpp"
#include "textsim/measures.hpp"

namespace textsim {

/// HighIsPositive suits similarities (a score above the threshold means
/// plagiarism); LowIsPositive suits distances (a score above the
/// threshold means not-plagiarism). Comparisons are strict.
enum class Polarity { HighIsPositive, LowIsPositive };

/// What tune_threshold maximizes on the training data.
enum class TuneObjective { MacroF1, Accuracy };

TuneObjective tune_objective_from_string(const std::string& s);

struct ThresholdClassifier {
    std::string feature;  // PairScores field name
    Polarity polarity = Polarity::HighIsPositive;
    double threshold = 0.0;
    double training_macro_f1 = 0.0;
};

struct TreeNode {
    int feature = -1;  // index into DecisionTree::features; -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
    Label label = Label::NotPlagiarism;  // leaves only

    bool is_leaf() const { return feature < 0; }
};

/// Binary CART-style classification tree over named features; internal
/// nodes send feature <= split left and feature > split right.
struct DecisionTree {
    std::vector<std::string> features;
    int max_depth = 3;
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double training_macro_f1 = 0.0;
};

using TrainedClassifier = std::variant<ThresholdClassifier, DecisionTree>;

/// Picks the threshold maximizing the objective on the given training
/// scores. Candidates are the midpoints between consecutive distinct
/// scores plus the sentinels 0 and 1; ties go to the smallest threshold.
/// Throws Error unless both labels are present.
ThresholdClassifier tune_threshold(const std::string& feature,
                                   const std::vector<std::pair<double, Label>>& scores,
                                   Polarity polarity,
                                   TuneObjective objective = TuneObjective::MacroF1);

Label classify_threshold(const ThresholdClassifier& clf, const PairScores& scores);

/// Greedy top-down induction with Gini impurity. Splits when some
/// (feature, midpoint) candidate reduces impurity; leaves take the
/// majority label with ties going to NotPlagiarism. Throws Error on
/// empty data or max_depth < 1.
DecisionTree train_tree(const std::vector<std::pair<std::vector<double>, Label>>& data,
                        const std::vector<std::string>& feature_names, int max_depth = 3);

Label classify_tree(const DecisionTree& tree, const std::vector<double>& features);

/// JSON (de)serialization for the CLI's train/apply separation. The kind
/// is carried in a "type" field ("threshold" or "tree").
nlohmann::json classifier_to_json(const TrainedClassifier& clf);
TrainedClassifier classifier_from_json(const nlohmann::json& j);

}  // namespace textsim
