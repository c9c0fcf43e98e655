#pragma once

#include <set>
#include <string>
#include <vector>

namespace textsim {

// A token is a case-folded word: non-empty, no whitespace.
using Token = std::string;

struct TokenizerOptions {
    // Lowercase ASCII letters before splitting. Non-ASCII bytes are kept
    // verbatim, so UTF-8 sequences survive untouched.
    bool fold_case = true;
};

/// A tokenized text: the token sequence plus its vocabulary (the set of
/// distinct tokens).
struct Document {
    std::vector<Token> tokens;
    std::set<Token> vocab;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }

    bool operator==(const Document& other) const = default;
};

/// Splits raw text into the maximal alphanumeric runs of its case-folded
/// form. Punctuation and whitespace are dropped. Empty input yields an
/// empty Document. Bytes >= 0x80 count as word bytes, which keeps
/// multi-byte UTF-8 characters inside a single token.
Document tokenize(const std::string& raw, const TokenizerOptions& options = {});

/// Builds a Document from an already-tokenized sequence, deriving the
/// vocabulary.
Document make_document(std::vector<Token> tokens);

/// Joins tokens with single spaces. tokenize(join_tokens(doc)) == doc.
std::string join_tokens(const Document& doc);

}  // namespace textsim
