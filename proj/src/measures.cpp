#include "textsim/measures.hpp"

#include <algorithm>
#include <cstddef>

#include "parallel.hpp"
#include "textsim/error.hpp"

namespace textsim {

namespace {

std::size_t intersection_size(const std::set<Token>& a, const std::set<Token>& b) {
    const std::set<Token>& small = a.size() <= b.size() ? a : b;
    const std::set<Token>& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const auto& w : small)
        if (large.count(w)) ++n;
    return n;
}

struct Candidate {
    std::size_t xi;
    std::size_t yi;
    double similarity;
};

// One application of the mutual-best rule over the words still
// unmatched. Returns true when at least one pair was accepted.
bool softmatch_round(const std::vector<Token>& xs, const std::vector<Token>& ys,
                     const std::vector<std::vector<double>>& sim_matrix,
                     std::vector<bool>& x_matched, std::vector<bool>& y_matched,
                     SoftMatchResult& result) {
    std::vector<double> row_max(xs.size(), 0.0);
    std::vector<double> col_max(ys.size(), 0.0);
    std::vector<Candidate> candidates;
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        if (x_matched[xi]) continue;
        for (std::size_t yi = 0; yi < ys.size(); ++yi) {
            if (y_matched[yi]) continue;
            const double s = sim_matrix[xi][yi];
            if (s <= 0.0) continue;  // similarity 0 is never matched
            row_max[xi] = std::max(row_max[xi], s);
            col_max[yi] = std::max(col_max[yi], s);
            candidates.push_back({xi, yi, s});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                  if (a.similarity != b.similarity) return a.similarity > b.similarity;
                  if (xs[a.xi] != xs[b.xi]) return xs[a.xi] < xs[b.xi];
                  return ys[a.yi] < ys[b.yi];
              });
    bool any = false;
    for (const auto& c : candidates) {
        if (x_matched[c.xi] || y_matched[c.yi]) continue;
        if (c.similarity != row_max[c.xi] || c.similarity != col_max[c.yi]) continue;
        x_matched[c.xi] = true;
        y_matched[c.yi] = true;
        result.matched.push_back({xs[c.xi], ys[c.yi], c.similarity});
        result.total += c.similarity;
        any = true;
    }
    return any;
}

}  // namespace

double feature_value(const PairScores& scores, std::string_view feature) {
    if (feature == "j") return scores.j;
    if (feature == "sj") return scores.sj;
    if (feature == "ed") return scores.ed;
    if (feature == "sed") return scores.sed;
    throw Error("unknown feature '" + std::string(feature) + "'");
}

SoftmatchRounds softmatch_rounds_from_string(const std::string& s) {
    if (s == "1") return SoftmatchRounds::One;
    if (s == "iterate") return SoftmatchRounds::Iterate;
    throw Error("unknown softmatch rounds setting '" + s + "'");
}

double jaccard(const Document& a, const Document& b) {
    if (a.vocab.empty() && b.vocab.empty())
        throw Error("jaccard: both vocabularies are empty");
    const std::size_t common = intersection_size(a.vocab, b.vocab);
    const std::size_t united = a.vocab.size() + b.vocab.size() - common;
    return static_cast<double>(common) / static_cast<double>(united);
}

SoftMatchResult softmatch(const std::set<Token>& xs, const std::set<Token>& ys,
                          const SimilarityBackend& backend, SoftmatchRounds rounds) {
    SoftMatchResult result;
    if (xs.empty() || ys.empty()) return result;

    const std::vector<Token> xv(xs.begin(), xs.end());
    const std::vector<Token> yv(ys.begin(), ys.end());
    std::vector<std::vector<double>> sim_matrix(xv.size(), std::vector<double>(yv.size()));
    for (std::size_t xi = 0; xi < xv.size(); ++xi)
        for (std::size_t yi = 0; yi < yv.size(); ++yi)
            sim_matrix[xi][yi] = backend.sim(xv[xi], yv[yi]);

    std::vector<bool> x_matched(xv.size(), false);
    std::vector<bool> y_matched(yv.size(), false);
    if (rounds == SoftmatchRounds::One) {
        softmatch_round(xv, yv, sim_matrix, x_matched, y_matched, result);
    } else {
        while (softmatch_round(xv, yv, sim_matrix, x_matched, y_matched, result)) {
        }
    }
    return result;
}

double semantic_jaccard(const Document& a, const Document& b,
                        const SimilarityBackend& backend, SoftmatchRounds rounds) {
    if (a.vocab.empty() && b.vocab.empty())
        throw Error("semantic_jaccard: both vocabularies are empty");
    std::set<Token> only_a;
    std::set<Token> only_b;
    std::set_difference(a.vocab.begin(), a.vocab.end(), b.vocab.begin(), b.vocab.end(),
                        std::inserter(only_a, only_a.end()));
    std::set_difference(b.vocab.begin(), b.vocab.end(), a.vocab.begin(), a.vocab.end(),
                        std::inserter(only_b, only_b.end()));
    const std::size_t common = a.vocab.size() - only_a.size();
    const std::size_t united = a.vocab.size() + b.vocab.size() - common;
    const double total = softmatch(only_a, only_b, backend, rounds).total;
    return (static_cast<double>(common) + total) / (static_cast<double>(united) - total);
}

double levenshtein(const Document& a, const Document& b) {
    if (a.empty() || b.empty()) throw Error("levenshtein: empty document");
    const std::size_t m = a.tokens.size();
    const std::size_t n = b.tokens.size();
    std::vector<std::size_t> costs(n + 1);
    for (std::size_t j = 0; j <= n; ++j) costs[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        std::size_t corner = costs[0];
        costs[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t upper = costs[j];
            const std::size_t sub = corner + (a.tokens[i - 1] == b.tokens[j - 1] ? 0 : 1);
            costs[j] = std::min({upper + 1, costs[j - 1] + 1, sub});
            corner = upper;
        }
    }
    return static_cast<double>(costs[n]) / static_cast<double>(std::max(m, n));
}

double semantic_edit_distance_raw(const Document& a, const Document& b,
                                  const SimilarityBackend& backend) {
    if (a.empty() || b.empty()) throw Error("semantic_edit_distance: empty document");
    const std::size_t m = a.tokens.size();
    const std::size_t n = b.tokens.size();

    std::vector<double> del_cost(m);
    for (std::size_t i = 0; i < m; ++i) del_cost[i] = backend.tau_dist(a.tokens[i]);
    std::vector<double> ins_cost(n);
    for (std::size_t j = 0; j < n; ++j) ins_cost[j] = backend.tau_dist(b.tokens[j]);

    std::vector<double> prev(n + 1);
    std::vector<double> curr(n + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + ins_cost[j - 1];
    for (std::size_t i = 1; i <= m; ++i) {
        curr[0] = prev[0] + del_cost[i - 1];
        for (std::size_t j = 1; j <= n; ++j) {
            // identical tokens substitute for free, even out-of-vocabulary ones
            const double sub = a.tokens[i - 1] == b.tokens[j - 1]
                                   ? 0.0
                                   : backend.dist(a.tokens[i - 1], b.tokens[j - 1]);
            curr[j] = std::min({prev[j] + del_cost[i - 1], curr[j - 1] + ins_cost[j - 1],
                                prev[j - 1] + sub});
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

double semantic_edit_distance(const Document& a, const Document& b,
                              const SimilarityBackend& backend) {
    const double raw = semantic_edit_distance_raw(a, b, backend);
    return raw / static_cast<double>(std::max(a.tokens.size(), b.tokens.size()));
}

PairScores score_pair(const TextPair& pair, const SimilarityBackend& backend,
                      const MeasureOptions& options) {
    PairScores scores;
    scores.j = jaccard(pair.source, pair.suspicious);
    scores.sj = semantic_jaccard(pair.source, pair.suspicious, backend, options.rounds);
    scores.ed = levenshtein(pair.source, pair.suspicious);
    scores.sed = semantic_edit_distance(pair.source, pair.suspicious, backend);
    return scores;
}

std::vector<PairScores> score_corpus(const Corpus& corpus, const SimilarityBackend& backend,
                                     const MeasureOptions& options, int jobs) {
    std::vector<PairScores> scores(corpus.pairs.size());
    detail::parallel_for(corpus.pairs.size(), jobs, [&](std::size_t i) {
        scores[i] = score_pair(corpus.pairs[i], backend, options);
    });
    return scores;
}

}  // namespace textsim
