#pragma once

// Independent reference implementations the real code is checked
// against. Deliberately brute force; none of them share code with the
// library.

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "textsim/corpus.hpp"
#include "textsim/eval.hpp"
#include "textsim/measures.hpp"
#include "textsim/token.hpp"
#include "textsim/wordsim.hpp"

namespace oracle {

// Minimum edit-script cost by exhaustive recursion over all scripts
// (delete/insert/substitute at every position), no memoization.
inline double edit_script_min(const std::vector<textsim::Token>& a,
                              const std::vector<textsim::Token>& b, std::size_t i,
                              std::size_t j, const textsim::SimilarityBackend& backend) {
    if (i == 0 && j == 0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0)
        best = std::min(best, edit_script_min(a, b, i - 1, j, backend) +
                                  backend.tau_dist(a[i - 1]));
    if (j > 0)
        best = std::min(best, edit_script_min(a, b, i, j - 1, backend) +
                                  backend.tau_dist(b[j - 1]));
    if (i > 0 && j > 0) {
        const double sub =
            a[i - 1] == b[j - 1] ? 0.0 : backend.dist(a[i - 1], b[j - 1]);
        best = std::min(best, edit_script_min(a, b, i - 1, j - 1, backend) + sub);
    }
    return best;
}

inline double edit_script_min(const textsim::Document& a, const textsim::Document& b,
                              const textsim::SimilarityBackend& backend) {
    return edit_script_min(a.tokens, b.tokens, a.tokens.size(), b.tokens.size(), backend);
}

// The mutual-best rule straight from its definition: a candidate pair
// survives when its similarity is positive and is the maximum of both
// its row and its column in the full similarity matrix; the surviving
// pairs are then made one-to-one greedily in (similarity desc, x asc,
// y asc) order.
inline textsim::SoftMatchResult softmatch_reference(const std::set<textsim::Token>& xs,
                                                    const std::set<textsim::Token>& ys,
                                                    const textsim::SimilarityBackend& backend) {
    struct Entry {
        std::string x, y;
        double s;
    };
    std::vector<Entry> mutual;
    for (const auto& x : xs) {
        for (const auto& y : ys) {
            const double s = backend.sim(x, y);
            if (s <= 0.0) continue;
            double row_best = 0.0;
            for (const auto& y2 : ys) row_best = std::max(row_best, backend.sim(x, y2));
            double col_best = 0.0;
            for (const auto& x2 : xs) col_best = std::max(col_best, backend.sim(x2, y));
            if (s == row_best && s == col_best) mutual.push_back({x, y, s});
        }
    }
    std::sort(mutual.begin(), mutual.end(), [](const Entry& a, const Entry& b) {
        if (a.s != b.s) return a.s > b.s;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    textsim::SoftMatchResult result;
    std::set<std::string> used_x, used_y;
    for (const auto& e : mutual) {
        if (used_x.count(e.x) || used_y.count(e.y)) continue;
        used_x.insert(e.x);
        used_y.insert(e.y);
        result.matched.push_back({e.x, e.y, e.s});
        result.total += e.s;
    }
    return result;
}

// Shortest-edge-count path from a node up to the root, following parent
// edges one at a time; depth = that count + 1.
inline unsigned depth_by_search(const textsim::Taxonomy& tax, std::uint32_t node) {
    if (node == tax.root) return 1;
    unsigned best = std::numeric_limits<unsigned>::max();
    for (const auto parent : tax.parents[node])
        best = std::min(best, depth_by_search(tax, parent));
    return best + 1;
}

// Exhaustive threshold search: best objective over all midpoint + sentinel
// candidates, computing each confusion matrix from scratch.
inline double best_threshold_score(const std::vector<std::pair<double, textsim::Label>>& data,
                                   textsim::Polarity polarity) {
    std::set<double> candidates{0.0, 1.0};
    std::vector<double> values;
    for (const auto& [v, l] : data) values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        candidates.insert((values[i] + values[i + 1]) / 2.0);

    double best = -1.0;
    for (const double t : candidates) {
        textsim::ConfusionCounts confusion;
        for (const auto& [v, gold] : data) {
            textsim::Label predicted;
            if (polarity == textsim::Polarity::HighIsPositive)
                predicted = v > t ? textsim::Label::Plagiarism : textsim::Label::NotPlagiarism;
            else
                predicted = v > t ? textsim::Label::NotPlagiarism : textsim::Label::Plagiarism;
            confusion.add(gold, predicted);
        }
        best = std::max(best, textsim::macro_f1(confusion));
    }
    return best;
}

}  // namespace oracle
