#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "textsim/token.hpp"

namespace textsim {

enum class Label { Plagiarism, NotPlagiarism };

enum class ParaphraseCategory {
    Morphological,
    Lexical,
    Syntactical,
    Discourse,
    Semantic,
    Miscellaneous,
    Unlabeled,  // corpora without category annotation
};

std::string to_string(Label label);
std::string to_string(ParaphraseCategory category);
Label label_from_string(const std::string& s);
ParaphraseCategory category_from_string(const std::string& s);

/// One corpus instance: source text, suspicious text, gold label and
/// (where annotated) the paraphrase category of the plagiarism case.
struct TextPair {
    std::string id;
    Document source;
    Document suspicious;
    Label label = Label::NotPlagiarism;
    ParaphraseCategory category = ParaphraseCategory::Unlabeled;

    bool operator==(const TextPair& other) const = default;
};

struct Corpus {
    std::string name;
    std::vector<TextPair> pairs;

    std::size_t size() const { return pairs.size(); }
    std::size_t positive_count() const;
    std::size_t negative_count() const;
    std::map<ParaphraseCategory, std::size_t> category_counts() const;
    /// True when at least one positive carries a category other than
    /// Unlabeled.
    bool has_categories() const;

    bool operator==(const Corpus& other) const = default;
};

enum class CorpusFormat { PairsTsv, MsrpTsv };

CorpusFormat corpus_format_from_string(const std::string& s);

/// Reads a pair corpus from disk.
///
/// pairs-tsv: one header line, then
///   id<TAB>label<TAB>category<TAB>source_text<TAB>suspicious_text
/// with label in {plagiarism, not-plagiarism} and category in
/// {morphological, lexical, syntactical, discourse, semantic,
/// miscellaneous, unlabeled}.
///
/// msrp-tsv: the native MSRP layout (quality, id1, id2, string1, string2);
/// quality 1/0 maps to plagiarism/not-plagiarism and the category is
/// always Unlabeled.
///
/// Throws Error on: unreadable file, invalid UTF-8, wrong column count
/// (names the line), unknown label or category, a text that tokenizes to
/// nothing (names the pair id), or a duplicate id.
Corpus load_corpus(const std::string& path, CorpusFormat format,
                   const TokenizerOptions& options = {});

/// Writes a corpus in pairs-tsv form; documents are emitted as their
/// space-joined token sequences, so load(save(c)) == c.
void save_corpus(const Corpus& corpus, const std::string& path);

/// Fraction of Plagiarism labels, in [0,1]. Throws Error on an empty
/// corpus.
double class_balance(const Corpus& corpus);

}  // namespace textsim
