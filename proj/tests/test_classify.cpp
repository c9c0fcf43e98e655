#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "textsim/classify.hpp"
#include "textsim/error.hpp"
#include "textsim/eval.hpp"

using namespace textsim;

namespace {

std::vector<std::pair<double, Label>> labeled(std::initializer_list<double> positives,
                                              std::initializer_list<double> negatives) {
    std::vector<std::pair<double, Label>> data;
    for (const double v : positives) data.emplace_back(v, Label::Plagiarism);
    for (const double v : negatives) data.emplace_back(v, Label::NotPlagiarism);
    return data;
}

}  // namespace

TEST_CASE("tune_threshold separates a clean fixture at the midpoint") {
    const auto clf =
        tune_threshold("sj", labeled({0.8, 0.9}, {0.1, 0.2}), Polarity::HighIsPositive);
    CHECK(clf.threshold == doctest::Approx(0.5));
    CHECK(clf.training_macro_f1 == 1.0);
    CHECK(clf.feature == "sj");
}

TEST_CASE("tune_threshold on interleaved scores is deterministic and oracle-optimal") {
    const auto data = labeled({0.2, 0.5, 0.8}, {0.3, 0.6, 0.9});
    const auto clf = tune_threshold("j", data, Polarity::HighIsPositive);
    CHECK(clf.training_macro_f1 < 1.0);
    CHECK(clf.training_macro_f1 ==
          doctest::Approx(oracle::best_threshold_score(data, Polarity::HighIsPositive)));
    const auto again = tune_threshold("j", data, Polarity::HighIsPositive);
    CHECK(clf.threshold == again.threshold);
}

TEST_CASE("tune_threshold with all-equal scores falls back to the sentinels") {
    const auto data = labeled({0.5, 0.5}, {0.5});
    const auto clf = tune_threshold("sj", data, Polarity::HighIsPositive);
    // candidates are only {0, 1}: 0 predicts everything positive
    // (macro 0.4), 1 predicts everything negative (macro 0.25)
    CHECK(clf.threshold == 0.0);
}

TEST_CASE("tune_threshold requires both labels") {
    CHECK_THROWS_AS(tune_threshold("sj", labeled({0.5, 0.6}, {}), Polarity::HighIsPositive),
                    Error);
}

TEST_CASE("tuned thresholds maximize macro-F1 over exhaustive enumeration") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng() % 46;
        std::vector<std::pair<double, Label>> data;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool positive = i < 2 ? i == 0 : rng() % 2 == 0;  // both labels present
            pos += positive ? 1 : 0;
            data.emplace_back(static_cast<double>(rng() % 11) / 10.0,
                              positive ? Label::Plagiarism : Label::NotPlagiarism);
        }
        const auto polarity = rng() % 2 == 0 ? Polarity::HighIsPositive
                                             : Polarity::LowIsPositive;
        const auto clf = tune_threshold("j", data, polarity);
        CHECK(clf.training_macro_f1 ==
              doctest::Approx(oracle::best_threshold_score(data, polarity)));
        CHECK(clf.threshold >= 0.0);
        CHECK(clf.threshold <= 1.0);
    }
}

TEST_CASE("classify_threshold applies polarity with strict comparison") {
    ThresholdClassifier high{"sj", Polarity::HighIsPositive, 0.5, 0.0};
    CHECK(classify_threshold(high, {0, 0.95, 0, 0}) == Label::Plagiarism);
    CHECK(classify_threshold(high, {0, 0.5, 0, 0}) == Label::NotPlagiarism);  // strict >

    ThresholdClassifier low{"sed", Polarity::LowIsPositive, 0.5, 0.0};
    CHECK(classify_threshold(low, {0, 0, 0, 0.9}) == Label::NotPlagiarism);
    CHECK(classify_threshold(low, {0, 0, 0, 0.5}) == Label::Plagiarism);  // strict >
}

TEST_CASE("monotone transforms leave threshold training predictions unchanged") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, Label>> data;
        for (std::size_t i = 0; i < 20; ++i)
            data.emplace_back(static_cast<double>(rng() % 101) / 100.0,
                              i % 3 == 0 ? Label::Plagiarism : Label::NotPlagiarism);
        auto transformed = data;
        for (auto& [v, l] : transformed) v = std::sqrt(v);  // strictly increasing on [0,1]

        const auto clf = tune_threshold("j", data, Polarity::HighIsPositive);
        const auto clf_t = tune_threshold("j", transformed, Polarity::HighIsPositive);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const Label p = data[i].first > clf.threshold ? Label::Plagiarism
                                                          : Label::NotPlagiarism;
            const Label pt = transformed[i].first > clf_t.threshold ? Label::Plagiarism
                                                                    : Label::NotPlagiarism;
            CHECK(p == pt);
        }
    }
}

namespace {

std::vector<std::pair<std::vector<double>, Label>> separable_tree_data() {
    std::vector<std::pair<std::vector<double>, Label>> data;
    for (const double sj : {0.75, 0.8, 0.9, 0.95})
        for (const double sed : {0.05, 0.1, 0.2})
            data.push_back({{sj, sed}, Label::Plagiarism});
    for (const double sj : {0.1, 0.2, 0.3})
        for (const double sed : {0.6, 0.8, 0.9})
            data.push_back({{sj, sed}, Label::NotPlagiarism});
    return data;
}

double training_accuracy(const DecisionTree& tree,
                         const std::vector<std::pair<std::vector<double>, Label>>& data) {
    std::size_t correct = 0;
    for (const auto& [features, label] : data)
        if (classify_tree(tree, features) == label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("train_tree fits a linearly separable fixture perfectly") {
    const auto data = separable_tree_data();
    const DecisionTree tree = train_tree(data, {"sj", "sed"}, 3);
    CHECK(training_accuracy(tree, data) == 1.0);
    CHECK(tree.training_macro_f1 == 1.0);
}

TEST_CASE("train_tree on single-label data is one leaf") {
    const std::vector<std::pair<std::vector<double>, Label>> data{
        {{0.1, 0.2}, Label::Plagiarism}, {{0.9, 0.8}, Label::Plagiarism}};
    const DecisionTree tree = train_tree(data, {"sj", "sed"}, 3);
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].is_leaf());
    CHECK(tree.nodes[0].label == Label::Plagiarism);
}

TEST_CASE("a depth-1 tree cannot fit an xor layout") {
    const std::vector<std::pair<std::vector<double>, Label>> data{
        {{0.0, 0.0}, Label::Plagiarism},
        {{1.0, 1.0}, Label::Plagiarism},
        {{0.0, 1.0}, Label::NotPlagiarism},
        {{1.0, 0.0}, Label::NotPlagiarism}};
    const DecisionTree tree = train_tree(data, {"sj", "sed"}, 1);
    CHECK(training_accuracy(tree, data) <= 0.75);
}

TEST_CASE("train_tree rejects empty data and bad depth") {
    CHECK_THROWS_AS(train_tree({}, {"sj", "sed"}, 3), Error);
    CHECK_THROWS_AS(train_tree({{{0.5, 0.5}, Label::Plagiarism}}, {"sj", "sed"}, 0), Error);
}

TEST_CASE("classify_tree descends deterministically, <= goes left") {
    DecisionTree tree;
    tree.features = {"sj", "sed"};
    tree.nodes.resize(3);
    tree.nodes[0] = {0, 0.5, 1, 2, Label::NotPlagiarism};
    tree.nodes[1] = {-1, 0, -1, -1, Label::NotPlagiarism};
    tree.nodes[2] = {-1, 0, -1, -1, Label::Plagiarism};
    CHECK(classify_tree(tree, {0.6, 0.0}) == Label::Plagiarism);
    CHECK(classify_tree(tree, {0.5, 0.0}) == Label::NotPlagiarism);  // boundary goes left

    DecisionTree leaf;
    leaf.features = {};
    leaf.nodes.push_back({-1, 0, -1, -1, Label::Plagiarism});
    CHECK(classify_tree(leaf, {}) == Label::Plagiarism);
}

TEST_CASE("identical data yields byte-identical serialized trees") {
    const auto data = separable_tree_data();
    const auto a = classifier_to_json(train_tree(data, {"sj", "sed"}, 3)).dump();
    const auto b = classifier_to_json(train_tree(data, {"sj", "sed"}, 3)).dump();
    CHECK(a == b);
}

TEST_CASE("training accuracy never decreases with depth") {
    std::mt19937 rng(59);
    std::vector<std::pair<std::vector<double>, Label>> data;
    for (std::size_t i = 0; i < 40; ++i)
        data.push_back({{static_cast<double>(rng() % 11) / 10.0,
                         static_cast<double>(rng() % 11) / 10.0},
                        rng() % 2 == 0 ? Label::Plagiarism : Label::NotPlagiarism});
    double previous = 0.0;
    for (int depth = 1; depth <= 6; ++depth) {
        const double accuracy = training_accuracy(train_tree(data, {"sj", "sed"}, depth), data);
        CHECK(accuracy >= previous - 1e-12);
        previous = accuracy;
    }
}

TEST_CASE("monotone transforms leave tree training predictions unchanged") {
    std::mt19937 rng(83);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::pair<std::vector<double>, Label>> data;
        for (std::size_t i = 0; i < 30; ++i)
            data.push_back({{static_cast<double>(rng() % 11) / 10.0,
                             static_cast<double>(rng() % 11) / 10.0},
                            rng() % 3 == 0 ? Label::Plagiarism : Label::NotPlagiarism});
        auto transformed = data;
        for (auto& [row, label] : transformed)
            for (auto& v : row) v = std::sqrt(v);

        const DecisionTree tree = train_tree(data, {"sj", "sed"}, 3);
        const DecisionTree tree_t = train_tree(transformed, {"sj", "sed"}, 3);
        for (std::size_t i = 0; i < data.size(); ++i)
            CHECK(classify_tree(tree, data[i].first) ==
                  classify_tree(tree_t, transformed[i].first));
    }
}

TEST_CASE("classifier json round-trips both kinds") {
    const ThresholdClassifier threshold{"sed", Polarity::LowIsPositive, 0.35, 0.88};
    const auto tj = classifier_to_json(TrainedClassifier{threshold});
    const auto threshold_back =
        std::get<ThresholdClassifier>(classifier_from_json(tj));
    CHECK(threshold_back.feature == "sed");
    CHECK(threshold_back.polarity == Polarity::LowIsPositive);
    CHECK(threshold_back.threshold == 0.35);
    CHECK(classifier_to_json(TrainedClassifier{threshold_back}).dump() == tj.dump());

    const DecisionTree tree = train_tree(separable_tree_data(), {"sj", "sed"}, 3);
    const auto j = classifier_to_json(TrainedClassifier{tree});
    const auto tree_back = std::get<DecisionTree>(classifier_from_json(j));
    CHECK(classifier_to_json(TrainedClassifier{tree_back}).dump() == j.dump());
    for (const auto& [features, label] : separable_tree_data())
        CHECK(classify_tree(tree_back, features) == classify_tree(tree, features));
}

TEST_CASE("tuning objective accuracy is available") {
    // 3 positives at 0.9, 1 negative at 0.9, 1 negative at 0.1: accuracy
    // prefers predicting the tied block positive
    const auto data = labeled({0.9, 0.9, 0.9}, {0.9, 0.1});
    const auto clf =
        tune_threshold("sj", data, Polarity::HighIsPositive, TuneObjective::Accuracy);
    CHECK(clf.threshold == doctest::Approx(0.5));
}
