#include "textsim/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "textsim/error.hpp"

namespace textsim {

namespace {

// Returns the byte offset of the first invalid UTF-8 byte, or npos if
// the whole string is well-formed.
std::size_t first_invalid_utf8(const std::string& s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const auto b = static_cast<unsigned char>(s[i]);
        std::size_t len;
        unsigned cp;
        if (b < 0x80) {
            i += 1;
            continue;
        } else if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp = b & 0x1Fu;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp = b & 0x0Fu;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp = b & 0x07u;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const auto c = static_cast<unsigned char>(s[i + k]);
            if ((c & 0xC0) != 0x80) return i + k;
            cp = (cp << 6) | (c & 0x3Fu);
        }
        // overlong encodings, surrogates and out-of-range code points
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            return i;
        }
        i += len;
    }
    return std::string::npos;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string to_string(Label label) {
    return label == Label::Plagiarism ? "plagiarism" : "not-plagiarism";
}

std::string to_string(ParaphraseCategory category) {
    switch (category) {
        case ParaphraseCategory::Morphological: return "morphological";
        case ParaphraseCategory::Lexical: return "lexical";
        case ParaphraseCategory::Syntactical: return "syntactical";
        case ParaphraseCategory::Discourse: return "discourse";
        case ParaphraseCategory::Semantic: return "semantic";
        case ParaphraseCategory::Miscellaneous: return "miscellaneous";
        case ParaphraseCategory::Unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

Label label_from_string(const std::string& s) {
    if (s == "plagiarism") return Label::Plagiarism;
    if (s == "not-plagiarism") return Label::NotPlagiarism;
    throw Error("unknown label '" + s + "'");
}

ParaphraseCategory category_from_string(const std::string& s) {
    if (s == "morphological") return ParaphraseCategory::Morphological;
    if (s == "lexical") return ParaphraseCategory::Lexical;
    if (s == "syntactical") return ParaphraseCategory::Syntactical;
    if (s == "discourse") return ParaphraseCategory::Discourse;
    if (s == "semantic") return ParaphraseCategory::Semantic;
    if (s == "miscellaneous") return ParaphraseCategory::Miscellaneous;
    if (s == "unlabeled") return ParaphraseCategory::Unlabeled;
    throw Error("unknown paraphrase category '" + s + "'");
}

CorpusFormat corpus_format_from_string(const std::string& s) {
    if (s == "pairs-tsv") return CorpusFormat::PairsTsv;
    if (s == "msrp-tsv") return CorpusFormat::MsrpTsv;
    throw Error("unknown corpus format '" + s + "'");
}

std::size_t Corpus::positive_count() const {
    std::size_t n = 0;
    for (const auto& p : pairs)
        if (p.label == Label::Plagiarism) ++n;
    return n;
}

std::size_t Corpus::negative_count() const { return pairs.size() - positive_count(); }

std::map<ParaphraseCategory, std::size_t> Corpus::category_counts() const {
    std::map<ParaphraseCategory, std::size_t> counts;
    for (const auto& p : pairs) ++counts[p.category];
    return counts;
}

bool Corpus::has_categories() const {
    for (const auto& p : pairs)
        if (p.label == Label::Plagiarism && p.category != ParaphraseCategory::Unlabeled)
            return true;
    return false;
}

Corpus load_corpus(const std::string& path, CorpusFormat format,
                   const TokenizerOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file '" + path + "'");

    Corpus corpus;
    corpus.name = path;
    std::unordered_set<std::string> seen_ids;

    std::string line;
    std::size_t line_no = 0;

    // both formats carry one header line
    if (!std::getline(in, line)) throw Error(path + ": empty corpus file");
    ++line_no;

    auto check_utf8 = [&](const std::string& text) {
        const std::size_t bad = first_invalid_utf8(text);
        if (bad != std::string::npos)
            throw Error(path + ":" + std::to_string(line_no) +
                        ": invalid UTF-8 at byte offset " + std::to_string(bad));
    };

    auto add_pair = [&](std::string id, const std::string& source_text,
                        const std::string& suspicious_text, Label label,
                        ParaphraseCategory category) {
        if (!seen_ids.insert(id).second)
            throw Error(path + ":" + std::to_string(line_no) + ": duplicate pair id '" +
                        id + "'");
        TextPair pair;
        pair.id = std::move(id);
        pair.source = tokenize(source_text, options);
        pair.suspicious = tokenize(suspicious_text, options);
        pair.label = label;
        pair.category = category;
        if (pair.source.empty() || pair.suspicious.empty())
            throw Error(path + ": pair '" + pair.id + "' has a text that tokenizes to nothing");
        corpus.pairs.push_back(std::move(pair));
    };

    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        check_utf8(line);
        const auto fields = split_tabs(line);
        if (format == CorpusFormat::PairsTsv) {
            if (fields.size() != 5)
                throw Error(path + ":" + std::to_string(line_no) + ": expected 5 columns, got " +
                            std::to_string(fields.size()));
            Label label;
            ParaphraseCategory category;
            try {
                label = label_from_string(fields[1]);
                category = category_from_string(fields[2]);
            } catch (const Error& e) {
                throw Error(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            add_pair(fields[0], fields[3], fields[4], label, category);
        } else {
            if (fields.size() != 5)
                throw Error(path + ":" + std::to_string(line_no) + ": expected 5 columns, got " +
                            std::to_string(fields.size()));
            const std::string& quality = fields[0];
            if (quality != "0" && quality != "1")
                throw Error(path + ":" + std::to_string(line_no) + ": unknown quality value '" +
                            quality + "'");
            const Label label = quality == "1" ? Label::Plagiarism : Label::NotPlagiarism;
            add_pair(fields[1] + "_" + fields[2], fields[3], fields[4], label,
                     ParaphraseCategory::Unlabeled);
        }
    }

    if (corpus.pairs.empty()) throw Error(path + ": corpus has no pairs");
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file '" + path + "'");
    out << "id\tlabel\tcategory\tsource_text\tsuspicious_text\n";
    for (const auto& pair : corpus.pairs) {
        out << pair.id << '\t' << to_string(pair.label) << '\t' << to_string(pair.category)
            << '\t' << join_tokens(pair.source) << '\t' << join_tokens(pair.suspicious)
            << '\n';
    }
    if (!out) throw Error("failed writing corpus file '" + path + "'");
}

double class_balance(const Corpus& corpus) {
    if (corpus.pairs.empty()) throw Error("class_balance: empty corpus");
    return static_cast<double>(corpus.positive_count()) /
           static_cast<double>(corpus.pairs.size());
}

}  // namespace textsim
