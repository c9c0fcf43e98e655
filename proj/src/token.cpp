#include "textsim/token.hpp"

namespace textsim {

namespace {

bool is_word_byte(unsigned char c) {
    if (c >= 0x80) return true;  // UTF-8 lead/continuation bytes
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char fold(char c, bool fold_case) {
    if (fold_case && c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
    return c;
}

}  // namespace

Document tokenize(const std::string& raw, const TokenizerOptions& options) {
    Document doc;
    std::string current;
    for (char c : raw) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            current.push_back(fold(c, options.fold_case));
        } else if (!current.empty()) {
            doc.tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) doc.tokens.push_back(std::move(current));
    doc.vocab.insert(doc.tokens.begin(), doc.tokens.end());
    return doc;
}

Document make_document(std::vector<Token> tokens) {
    Document doc;
    doc.tokens = std::move(tokens);
    doc.vocab.insert(doc.tokens.begin(), doc.tokens.end());
    return doc;
}

std::string join_tokens(const Document& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += doc.tokens[i];
    }
    return out;
}

}  // namespace textsim
