#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "textsim/corpus.hpp"
#include "textsim/token.hpp"

namespace textsim {

enum class BackendKind { ExactMatch, EmbeddingCosine, TaxonomyWup };

/// What sim(x, y) returns when either word is outside the backend's
/// vocabulary. ExactFallback scores the pair as plain string equality;
/// Zero scores it 0 unconditionally. Under both policies tau_dist of an
/// unknown word is 1 (unknown words are treated as maximally specific).
enum class OovPolicy { ExactFallback, Zero };

OovPolicy oov_policy_from_string(const std::string& s);

/// Word-pair similarity source. Implementations guarantee
/// sim(x, y) in [0,1], sim(x, y) == sim(y, x), and sim(x, x) == 1 for
/// every in-vocabulary x. dist is always 1 - sim.
class SimilarityBackend {
public:
    virtual ~SimilarityBackend() = default;

    virtual BackendKind kind() const = 0;
    virtual double sim(const Token& x, const Token& y) const = 0;
    /// Distance from the designated general word tau to x, in [0,1]. The
    /// greater the value, the more specific the word.
    virtual double tau_dist(const Token& x) const = 0;
    virtual bool knows(const Token& word) const = 0;

    double dist(const Token& x, const Token& y) const { return 1.0 - sim(x, y); }
};

/// sim(x, y) = 1 iff x == y. tau is a reserved token that never occurs in
/// documents, so tau_dist is constantly 1 and the semantic measures
/// reduce to their classic forms.
class ExactMatchBackend final : public SimilarityBackend {
public:
    BackendKind kind() const override { return BackendKind::ExactMatch; }
    double sim(const Token& x, const Token& y) const override { return x == y ? 1.0 : 0.0; }
    double tau_dist(const Token&) const override { return 1.0; }
    bool knows(const Token&) const override { return true; }
};

struct EmbeddingTable {
    std::size_t dimension = 0;
    std::vector<std::string> words;            // file order (first occurrence)
    std::vector<std::vector<double>> vectors;  // parallel to words
    std::unordered_map<std::string, std::size_t> index;
    std::size_t duplicate_count = 0;  // rows replaced by a later duplicate

    const std::vector<double>* find(const Token& word) const;
};

/// Loads a textual word-vector file: a "count dimension" header line,
/// then one "word v1 ... vdim" row per line. Duplicate words keep the
/// last vector and bump duplicate_count. Throws Error on a row whose
/// value count disagrees with the header dimension, an unparsable or
/// non-finite value (both name the line), or an empty table.
EmbeddingTable load_embeddings(const std::string& path);

/// Cosine similarity over loaded word vectors, clamped to [0,1]. tau is
/// the centroid of the first tau_top_k vectors in file order (word2vec
/// files list words by descending frequency).
class EmbeddingBackend final : public SimilarityBackend {
public:
    EmbeddingBackend(EmbeddingTable table, OovPolicy policy = OovPolicy::ExactFallback,
                     std::size_t tau_top_k = 100);

    BackendKind kind() const override { return BackendKind::EmbeddingCosine; }
    double sim(const Token& x, const Token& y) const override;
    double tau_dist(const Token& x) const override;
    bool knows(const Token& word) const override { return table_.index.count(word) > 0; }

    const EmbeddingTable& table() const { return table_; }

private:
    EmbeddingTable table_;
    OovPolicy policy_;
    std::vector<std::vector<double>> units_;  // normalized vectors
    std::vector<double> tau_;                 // centroid, unnormalized

    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::string, double> tau_cache_;
};

struct Taxonomy {
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, std::uint32_t> node_index;
    std::vector<std::vector<std::uint32_t>> parents;  // per node
    std::vector<std::uint32_t> depth;                 // depth(root) == 1
    std::vector<std::vector<std::uint32_t>> ancestors;  // upward closure, self included
    std::unordered_map<std::string, std::vector<std::uint32_t>> lexicon;
    std::uint32_t root = 0;
};

/// Loads a taxonomy file with two record types:
///   edge<TAB>child_synset<TAB>parent_synset
///   word<TAB>surface<TAB>synset
/// Validates that the parent graph is acyclic with a single root every
/// node reaches, and that lexicon entries name existing synsets. Node
/// depths are precomputed with depth(root) = 1 and, for multi-parent
/// synsets, depth = 1 + min over parents.
Taxonomy load_taxonomy(const std::string& path);

/// Wu-Palmer similarity over a synset taxonomy:
/// 2 * depth(deepest common ancestor) / (depth(s_x) + depth(s_y)),
/// maximized over all synset pairs of the two words. tau is a configured
/// synset (default: the root's single child when unique, else the root).
class TaxonomyBackend final : public SimilarityBackend {
public:
    TaxonomyBackend(Taxonomy taxonomy, OovPolicy policy = OovPolicy::ExactFallback,
                    std::optional<std::string> tau_synset = std::nullopt);

    BackendKind kind() const override { return BackendKind::TaxonomyWup; }
    double sim(const Token& x, const Token& y) const override;
    double tau_dist(const Token& x) const override;
    bool knows(const Token& word) const override { return taxonomy_.lexicon.count(word) > 0; }

    const Taxonomy& taxonomy() const { return taxonomy_; }
    /// Wu-Palmer value for two synsets (exposed for tests and tools).
    double wup(std::uint32_t synset_a, std::uint32_t synset_b) const;

private:
    Taxonomy taxonomy_;
    OovPolicy policy_;
    std::uint32_t tau_synset_ = 0;

    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::string, double> tau_cache_;
};

/// Fraction of the corpus vocabulary the backend knows.
double coverage(const SimilarityBackend& backend, const Corpus& corpus);

}  // namespace textsim
