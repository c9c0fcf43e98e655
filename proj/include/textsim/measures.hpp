#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "textsim/corpus.hpp"
#include "textsim/token.hpp"
#include "textsim/wordsim.hpp"

namespace textsim {

/// The four measure outputs for one text pair; the feature vector used
/// for classification. j/sj are similarities, ed/sed distances, all in
/// [0,1].
struct PairScores {
    double j = 0.0;
    double sj = 0.0;
    double ed = 0.0;
    double sed = 0.0;
};

/// Looks up a PairScores field by name ("j", "sj", "ed", "sed").
double feature_value(const PairScores& scores, std::string_view feature);

struct SoftPair {
    Token x;
    Token y;
    double similarity = 0.0;
};

/// Result of the soft word matching between two vocabularies: the
/// retained one-to-one mutual-best pairs and the sum of their
/// similarities.
struct SoftMatchResult {
    std::vector<SoftPair> matched;
    double total = 0.0;
};

/// One round keeps exactly the pairs that are each other's best match in
/// the full similarity matrix; a word whose best partner is claimed by a
/// stronger pair contributes nothing. Iterate repeats the rule on the
/// leftover words until no further pair qualifies.
enum class SoftmatchRounds { One, Iterate };

SoftmatchRounds softmatch_rounds_from_string(const std::string& s);

struct MeasureOptions {
    SoftmatchRounds rounds = SoftmatchRounds::One;
};

/// Classic Jaccard coefficient over the two vocabularies. Throws Error
/// when both vocabularies are empty.
double jaccard(const Document& a, const Document& b);

/// Pairs up words across xs and ys by the mutual-best rule: a candidate
/// survives only if its similarity is the maximum for both of its words.
/// Ties are broken by (similarity desc, x asc, y asc) with greedy
/// acceptance, pairs of similarity 0 are never matched, and each word is
/// used at most once.
SoftMatchResult softmatch(const std::set<Token>& xs, const std::set<Token>& ys,
                          const SimilarityBackend& backend,
                          SoftmatchRounds rounds = SoftmatchRounds::One);

/// Semantically-informed Jaccard: the soft-match mass of the
/// non-overlapping vocabularies is added to the intersection and removed
/// from the union,
///   (|Va n Vb| + softmatch) / (|Va u Vb| - softmatch).
/// Throws Error when both vocabularies are empty.
double semantic_jaccard(const Document& a, const Document& b, const SimilarityBackend& backend,
                        SoftmatchRounds rounds = SoftmatchRounds::One);

/// Token-level unit-cost edit distance normalized by max(|A|, |B|).
/// Throws Error when either document is empty.
double levenshtein(const Document& a, const Document& b);

/// Raw cost of the semantically-informed edit distance: substitution
/// costs dist(A_i, B_j) (0 for identical tokens, even out-of-vocabulary
/// ones), insertion and deletion cost the inserted/deleted word's
/// distance to the general word tau. Throws Error when either document
/// is empty.
double semantic_edit_distance_raw(const Document& a, const Document& b,
                                  const SimilarityBackend& backend);

/// semantic_edit_distance_raw normalized by max(|A|, |B|), in [0,1].
double semantic_edit_distance(const Document& a, const Document& b,
                              const SimilarityBackend& backend);

/// All four measures for one pair, computed on (source, suspicious).
PairScores score_pair(const TextPair& pair, const SimilarityBackend& backend,
                      const MeasureOptions& options = {});

/// Scores every pair of the corpus. jobs > 1 fans the work out across
/// threads; the result order is always corpus order.
std::vector<PairScores> score_corpus(const Corpus& corpus, const SimilarityBackend& backend,
                                     const MeasureOptions& options = {}, int jobs = 1);

}  // namespace textsim
