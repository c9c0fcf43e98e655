#include "textsim/classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "textsim/error.hpp"
#include "textsim/eval.hpp"

namespace textsim {

namespace {

Label threshold_predict(double value, Polarity polarity, double threshold) {
    if (polarity == Polarity::HighIsPositive)
        return value > threshold ? Label::Plagiarism : Label::NotPlagiarism;
    return value > threshold ? Label::NotPlagiarism : Label::Plagiarism;
}

double objective_score(const ConfusionCounts& confusion, TuneObjective objective) {
    if (objective == TuneObjective::Accuracy) {
        return static_cast<double>(confusion.tp + confusion.tn) /
               static_cast<double>(confusion.total());
    }
    return macro_f1(confusion);
}

double gini(std::size_t pos, std::size_t neg) {
    const double n = static_cast<double>(pos + neg);
    if (n == 0.0) return 0.0;
    const double pp = static_cast<double>(pos) / n;
    const double pn = static_cast<double>(neg) / n;
    return 1.0 - pp * pp - pn * pn;
}

Label majority_label(std::size_t pos, std::size_t neg) {
    // ties go to the majority class of the corpus domain
    return pos > neg ? Label::Plagiarism : Label::NotPlagiarism;
}

struct TreeBuilder {
    const std::vector<std::pair<std::vector<double>, Label>>& data;
    std::size_t feature_count;
    int max_depth;
    std::vector<TreeNode> nodes;

    int build(std::vector<std::size_t> indices, int depth) {
        std::size_t pos = 0;
        for (const auto i : indices)
            if (data[i].second == Label::Plagiarism) ++pos;
        const std::size_t neg = indices.size() - pos;

        const int node_index = static_cast<int>(nodes.size());
        nodes.emplace_back();

        const bool pure = pos == 0 || neg == 0;
        if (pure || depth >= max_depth) {
            nodes[node_index].label = majority_label(pos, neg);
            return node_index;
        }

        // best (feature, midpoint) split by Gini reduction; first best wins
        const double parent_gini = gini(pos, neg);
        const double n = static_cast<double>(indices.size());
        double best_improvement = 0.0;
        int best_feature = -1;
        double best_split = 0.0;
        for (std::size_t f = 0; f < feature_count; ++f) {
            std::set<double> distinct;
            for (const auto i : indices) distinct.insert(data[i].first[f]);
            if (distinct.size() < 2) continue;
            std::vector<double> values(distinct.begin(), distinct.end());
            for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                const double split = (values[v] + values[v + 1]) / 2.0;
                std::size_t lpos = 0, lneg = 0, rpos = 0, rneg = 0;
                for (const auto i : indices) {
                    const bool left = data[i].first[f] <= split;
                    const bool positive = data[i].second == Label::Plagiarism;
                    if (left)
                        positive ? ++lpos : ++lneg;
                    else
                        positive ? ++rpos : ++rneg;
                }
                const double weighted =
                    (static_cast<double>(lpos + lneg) * gini(lpos, lneg) +
                     static_cast<double>(rpos + rneg) * gini(rpos, rneg)) /
                    n;
                const double improvement = parent_gini - weighted;
                if (improvement > best_improvement + 1e-12) {
                    best_improvement = improvement;
                    best_feature = static_cast<int>(f);
                    best_split = split;
                }
            }
        }

        if (best_feature < 0) {
            nodes[node_index].label = majority_label(pos, neg);
            return node_index;
        }

        std::vector<std::size_t> left_indices;
        std::vector<std::size_t> right_indices;
        for (const auto i : indices) {
            if (data[i].first[static_cast<std::size_t>(best_feature)] <= best_split)
                left_indices.push_back(i);
            else
                right_indices.push_back(i);
        }
        nodes[node_index].feature = best_feature;
        nodes[node_index].split = best_split;
        nodes[node_index].left = build(std::move(left_indices), depth + 1);
        nodes[node_index].right = build(std::move(right_indices), depth + 1);
        return node_index;
    }
};

nlohmann::json tree_node_to_json(const DecisionTree& tree, int index) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    nlohmann::json j;
    if (node.is_leaf()) {
        j["label"] = to_string(node.label);
    } else {
        j["feature"] = tree.features[static_cast<std::size_t>(node.feature)];
        j["split"] = node.split;
        j["left"] = tree_node_to_json(tree, node.left);
        j["right"] = tree_node_to_json(tree, node.right);
    }
    return j;
}

int tree_node_from_json(const nlohmann::json& j, DecisionTree& tree) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("label")) {
        tree.nodes[static_cast<std::size_t>(index)].label =
            label_from_string(j.at("label").get<std::string>());
        return index;
    }
    const std::string feature = j.at("feature").get<std::string>();
    const auto it = std::find(tree.features.begin(), tree.features.end(), feature);
    if (it == tree.features.end())
        throw Error("tree node references unknown feature '" + feature + "'");
    tree.nodes[static_cast<std::size_t>(index)].feature =
        static_cast<int>(it - tree.features.begin());
    tree.nodes[static_cast<std::size_t>(index)].split = j.at("split").get<double>();
    const int left = tree_node_from_json(j.at("left"), tree);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    const int right = tree_node_from_json(j.at("right"), tree);
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace

TuneObjective tune_objective_from_string(const std::string& s) {
    if (s == "macro-f1") return TuneObjective::MacroF1;
    if (s == "accuracy") return TuneObjective::Accuracy;
    throw Error("unknown tuning objective '" + s + "'");
}

ThresholdClassifier tune_threshold(const std::string& feature,
                                   const std::vector<std::pair<double, Label>>& scores,
                                   Polarity polarity, TuneObjective objective) {
    std::size_t pos = 0;
    for (const auto& [value, label] : scores)
        if (label == Label::Plagiarism) ++pos;
    if (pos == 0 || pos == scores.size())
        throw Error("tune_threshold: training data must contain both labels");

    std::set<double> distinct;
    for (const auto& [value, label] : scores) distinct.insert(value);
    std::vector<double> sorted(distinct.begin(), distinct.end());
    std::set<double> candidates{0.0, 1.0};
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        candidates.insert((sorted[i] + sorted[i + 1]) / 2.0);

    double best_threshold = 0.0;
    double best_score = -1.0;
    for (const double t : candidates) {  // ascending, so ties keep the smallest
        ConfusionCounts confusion;
        for (const auto& [value, label] : scores)
            confusion.add(label, threshold_predict(value, polarity, t));
        const double score = objective_score(confusion, objective);
        if (score > best_score) {
            best_score = score;
            best_threshold = t;
        }
    }

    ThresholdClassifier clf;
    clf.feature = feature;
    clf.polarity = polarity;
    clf.threshold = best_threshold;
    ConfusionCounts confusion;
    for (const auto& [value, label] : scores)
        confusion.add(label, threshold_predict(value, polarity, best_threshold));
    clf.training_macro_f1 = macro_f1(confusion);
    return clf;
}

Label classify_threshold(const ThresholdClassifier& clf, const PairScores& scores) {
    return threshold_predict(feature_value(scores, clf.feature), clf.polarity, clf.threshold);
}

DecisionTree train_tree(const std::vector<std::pair<std::vector<double>, Label>>& data,
                        const std::vector<std::string>& feature_names, int max_depth) {
    if (data.empty()) throw Error("train_tree: empty training data");
    if (max_depth < 1) throw Error("train_tree: max_depth must be at least 1");
    for (const auto& [features, label] : data)
        if (features.size() != feature_names.size())
            throw Error("train_tree: feature row width mismatch");

    DecisionTree tree;
    tree.features = feature_names;
    tree.max_depth = max_depth;
    TreeBuilder builder{data, feature_names.size(), max_depth, {}};
    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) all[i] = i;
    builder.build(std::move(all), 0);
    tree.nodes = std::move(builder.nodes);

    ConfusionCounts confusion;
    for (const auto& [features, label] : data)
        confusion.add(label, classify_tree(tree, features));
    tree.training_macro_f1 = macro_f1(confusion);
    return tree;
}

Label classify_tree(const DecisionTree& tree, const std::vector<double>& features) {
    if (tree.nodes.empty()) throw Error("classify_tree: empty tree");
    if (features.size() != tree.features.size())
        throw Error("classify_tree: expected " + std::to_string(tree.features.size()) +
                    " features, got " + std::to_string(features.size()));
    int index = 0;
    while (true) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        if (node.is_leaf()) return node.label;
        index = features[static_cast<std::size_t>(node.feature)] <= node.split ? node.left
                                                                               : node.right;
    }
}

nlohmann::json classifier_to_json(const TrainedClassifier& clf) {
    nlohmann::json j;
    if (const auto* threshold = std::get_if<ThresholdClassifier>(&clf)) {
        j["type"] = "threshold";
        j["feature"] = threshold->feature;
        j["polarity"] = threshold->polarity == Polarity::HighIsPositive ? "high-is-positive"
                                                                        : "low-is-positive";
        j["threshold"] = threshold->threshold;
        j["training_macro_f1"] = threshold->training_macro_f1;
    } else {
        const auto& tree = std::get<DecisionTree>(clf);
        j["type"] = "tree";
        j["features"] = tree.features;
        j["max_depth"] = tree.max_depth;
        j["training_macro_f1"] = tree.training_macro_f1;
        j["root"] = tree_node_to_json(tree, 0);
    }
    return j;
}

TrainedClassifier classifier_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "threshold") {
        ThresholdClassifier clf;
        clf.feature = j.at("feature").get<std::string>();
        const std::string polarity = j.at("polarity").get<std::string>();
        if (polarity == "high-is-positive")
            clf.polarity = Polarity::HighIsPositive;
        else if (polarity == "low-is-positive")
            clf.polarity = Polarity::LowIsPositive;
        else
            throw Error("unknown polarity '" + polarity + "'");
        clf.threshold = j.at("threshold").get<double>();
        clf.training_macro_f1 = j.value("training_macro_f1", 0.0);
        return clf;
    }
    if (type == "tree") {
        DecisionTree tree;
        tree.features = j.at("features").get<std::vector<std::string>>();
        tree.max_depth = j.value("max_depth", 3);
        tree.training_macro_f1 = j.value("training_macro_f1", 0.0);
        tree_node_from_json(j.at("root"), tree);
        return tree;
    }
    throw Error("unknown classifier type '" + type + "'");
}

}  // namespace textsim
