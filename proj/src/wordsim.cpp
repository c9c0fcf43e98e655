#include "textsim/wordsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "textsim/error.hpp"

namespace textsim {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// cosine of raw vectors, 0 when either has zero norm
double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream iss(line);
    std::string f;
    while (iss >> f) fields.push_back(std::move(f));
    return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(path + ":" + std::to_string(line_no) + ": unparsable value '" + s + "'");
    if (!std::isfinite(value))
        throw Error(path + ":" + std::to_string(line_no) + ": non-finite value '" + s + "'");
    return value;
}

std::size_t parse_count(const std::string& s, const std::string& path, std::size_t line_no) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(path + ":" + std::to_string(line_no) + ": unparsable count '" + s + "'");
    return value;
}

}  // namespace

OovPolicy oov_policy_from_string(const std::string& s) {
    if (s == "exact-fallback") return OovPolicy::ExactFallback;
    if (s == "zero") return OovPolicy::Zero;
    throw Error("unknown oov policy '" + s + "'");
}

const std::vector<double>* EmbeddingTable::find(const Token& word) const {
    const auto it = index.find(word);
    return it == index.end() ? nullptr : &vectors[it->second];
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open embedding file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty embedding file");
    std::size_t line_no = 1;

    const auto header = split_ws(line);
    if (header.size() != 2)
        throw Error(path + ":1: expected header 'count dimension'");
    EmbeddingTable table;
    parse_count(header[0], path, 1);  // count is informational, but must be numeric
    table.dimension = parse_count(header[1], path, 1);
    if (table.dimension == 0) throw Error(path + ":1: dimension must be positive");

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_ws(line);
        if (fields.size() != table.dimension + 1)
            throw Error(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.dimension) + " values, got " +
                        std::to_string(fields.size() - 1));
        std::vector<double> vec(table.dimension);
        for (std::size_t d = 0; d < table.dimension; ++d)
            vec[d] = parse_double(fields[d + 1], path, line_no);

        const auto it = table.index.find(fields[0]);
        if (it != table.index.end()) {
            table.vectors[it->second] = std::move(vec);  // last occurrence wins
            ++table.duplicate_count;
        } else {
            table.index.emplace(fields[0], table.words.size());
            table.words.push_back(std::move(fields[0]));
            table.vectors.push_back(std::move(vec));
        }
    }

    if (table.words.empty()) throw Error(path + ": embedding table has no entries");
    return table;
}

EmbeddingBackend::EmbeddingBackend(EmbeddingTable table, OovPolicy policy,
                                   std::size_t tau_top_k)
    : table_(std::move(table)), policy_(policy) {
    units_.reserve(table_.vectors.size());
    for (const auto& v : table_.vectors) {
        const double n = norm(v);
        std::vector<double> u(v.size(), 0.0);
        if (n > 0.0)
            for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / n;
        units_.push_back(std::move(u));
    }
    const std::size_t k = std::min(tau_top_k, table_.words.size());
    tau_.assign(table_.dimension, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t d = 0; d < table_.dimension; ++d) tau_[d] += table_.vectors[i][d];
    for (double& t : tau_) t /= static_cast<double>(k);
}

double EmbeddingBackend::sim(const Token& x, const Token& y) const {
    const auto ix = table_.index.find(x);
    const auto iy = table_.index.find(y);
    if (ix == table_.index.end() || iy == table_.index.end()) {
        if (policy_ == OovPolicy::Zero) return 0.0;
        return x == y ? 1.0 : 0.0;
    }
    if (x == y) return 1.0;
    return clamp01(dot(units_[ix->second], units_[iy->second]));
}

double EmbeddingBackend::tau_dist(const Token& x) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        const auto it = tau_cache_.find(x);
        if (it != tau_cache_.end()) return it->second;
    }
    const auto ix = table_.index.find(x);
    const double d =
        ix == table_.index.end() ? 1.0 : 1.0 - clamp01(cosine(tau_, table_.vectors[ix->second]));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    tau_cache_.emplace(x, d);
    return d;
}

namespace {

// DFS over parent edges; returns a node on a cycle, or nullopt.
std::optional<std::uint32_t> find_cycle(const std::vector<std::vector<std::uint32_t>>& parents) {
    enum : std::uint8_t { White, Gray, Black };
    std::vector<std::uint8_t> color(parents.size(), White);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    for (std::uint32_t start = 0; start < parents.size(); ++start) {
        if (color[start] != White) continue;
        stack.emplace_back(start, 0);
        color[start] = Gray;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < parents[node].size()) {
                const std::uint32_t parent = parents[node][next++];
                if (color[parent] == Gray) return parent;
                if (color[parent] == White) {
                    color[parent] = Gray;
                    stack.emplace_back(parent, 0);
                }
            } else {
                color[node] = Black;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

}  // namespace

Taxonomy load_taxonomy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open taxonomy file '" + path + "'");

    Taxonomy tax;
    auto intern = [&tax](const std::string& id) -> std::uint32_t {
        const auto it = tax.node_index.find(id);
        if (it != tax.node_index.end()) return it->second;
        const auto idx = static_cast<std::uint32_t>(tax.node_ids.size());
        tax.node_index.emplace(id, idx);
        tax.node_ids.push_back(id);
        tax.parents.emplace_back();
        return idx;
    };

    std::vector<std::pair<std::string, std::string>> lexicon_rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
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
        if (fields.size() != 3)
            throw Error(path + ":" + std::to_string(line_no) + ": expected 3 columns, got " +
                        std::to_string(fields.size()));
        if (fields[0] == "edge") {
            const std::uint32_t child = intern(fields[1]);
            const std::uint32_t parent = intern(fields[2]);
            if (child == parent)
                throw Error(path + ":" + std::to_string(line_no) + ": self-edge on synset '" +
                            fields[1] + "'");
            tax.parents[child].push_back(parent);
        } else if (fields[0] == "word") {
            lexicon_rows.emplace_back(fields[1], fields[2]);
        } else {
            throw Error(path + ":" + std::to_string(line_no) + ": unknown record type '" +
                        fields[0] + "'");
        }
    }
    if (tax.node_ids.empty()) throw Error(path + ": taxonomy has no synsets");

    for (auto& [word, synset] : lexicon_rows) {
        const auto it = tax.node_index.find(synset);
        if (it == tax.node_index.end())
            throw Error(path + ": word '" + word + "' references unknown synset '" + synset +
                        "'");
        tax.lexicon[word].push_back(it->second);
    }

    if (const auto cyclic = find_cycle(tax.parents))
        throw Error(path + ": cycle through synset '" + tax.node_ids[*cyclic] + "'");

    std::vector<std::uint32_t> roots;
    for (std::uint32_t i = 0; i < tax.node_ids.size(); ++i)
        if (tax.parents[i].empty()) roots.push_back(i);
    if (roots.size() != 1) {
        std::string msg = path + ": taxonomy must have exactly one root, found " +
                          std::to_string(roots.size());
        for (const auto r : roots) msg += " '" + tax.node_ids[r] + "'";
        throw Error(msg);
    }
    tax.root = roots[0];

    // depth via BFS from the root over child edges; multi-parent nodes get
    // 1 + min over parents, which is exactly BFS distance + 1
    std::vector<std::vector<std::uint32_t>> children(tax.node_ids.size());
    for (std::uint32_t child = 0; child < tax.node_ids.size(); ++child)
        for (const auto parent : tax.parents[child]) children[parent].push_back(child);
    tax.depth.assign(tax.node_ids.size(), 0);
    tax.depth[tax.root] = 1;
    std::vector<std::uint32_t> queue{tax.root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t node = queue[head];
        for (const auto child : children[node]) {
            if (tax.depth[child] == 0) {
                tax.depth[child] = tax.depth[node] + 1;
                queue.push_back(child);
            }
        }
    }
    // acyclic + single root implies every node was reached

    tax.ancestors.resize(tax.node_ids.size());
    for (std::uint32_t i = 0; i < tax.node_ids.size(); ++i) {
        std::set<std::uint32_t> seen{i};
        std::vector<std::uint32_t> frontier{i};
        while (!frontier.empty()) {
            const std::uint32_t node = frontier.back();
            frontier.pop_back();
            for (const auto parent : tax.parents[node])
                if (seen.insert(parent).second) frontier.push_back(parent);
        }
        tax.ancestors[i].assign(seen.begin(), seen.end());
    }

    return tax;
}

TaxonomyBackend::TaxonomyBackend(Taxonomy taxonomy, OovPolicy policy,
                                 std::optional<std::string> tau_synset)
    : taxonomy_(std::move(taxonomy)), policy_(policy) {
    if (tau_synset) {
        const auto it = taxonomy_.node_index.find(*tau_synset);
        if (it == taxonomy_.node_index.end())
            throw Error("tau synset '" + *tau_synset + "' not in taxonomy");
        tau_synset_ = it->second;
    } else {
        // root's single child when unique, else the root itself
        std::vector<std::uint32_t> root_children;
        for (std::uint32_t i = 0; i < taxonomy_.node_ids.size(); ++i)
            for (const auto p : taxonomy_.parents[i])
                if (p == taxonomy_.root) root_children.push_back(i);
        tau_synset_ = root_children.size() == 1 ? root_children[0] : taxonomy_.root;
    }
}

double TaxonomyBackend::wup(std::uint32_t synset_a, std::uint32_t synset_b) const {
    const auto& anc_a = taxonomy_.ancestors[synset_a];
    const auto& anc_b = taxonomy_.ancestors[synset_b];
    // ancestor lists are sorted; intersect and keep the deepest
    std::uint32_t best_depth = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < anc_a.size() && ib < anc_b.size()) {
        if (anc_a[ia] < anc_b[ib]) {
            ++ia;
        } else if (anc_b[ib] < anc_a[ia]) {
            ++ib;
        } else {
            best_depth = std::max(best_depth, taxonomy_.depth[anc_a[ia]]);
            ++ia;
            ++ib;
        }
    }
    return 2.0 * best_depth /
           static_cast<double>(taxonomy_.depth[synset_a] + taxonomy_.depth[synset_b]);
}

double TaxonomyBackend::sim(const Token& x, const Token& y) const {
    const auto ix = taxonomy_.lexicon.find(x);
    const auto iy = taxonomy_.lexicon.find(y);
    if (ix == taxonomy_.lexicon.end() || iy == taxonomy_.lexicon.end()) {
        if (policy_ == OovPolicy::Zero) return 0.0;
        return x == y ? 1.0 : 0.0;
    }
    if (x == y) return 1.0;
    double best = 0.0;
    for (const auto sx : ix->second)
        for (const auto sy : iy->second) best = std::max(best, wup(sx, sy));
    return clamp01(best);
}

double TaxonomyBackend::tau_dist(const Token& x) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        const auto it = tau_cache_.find(x);
        if (it != tau_cache_.end()) return it->second;
    }
    double d = 1.0;
    const auto ix = taxonomy_.lexicon.find(x);
    if (ix != taxonomy_.lexicon.end()) {
        double best = 0.0;
        for (const auto sx : ix->second) best = std::max(best, wup(tau_synset_, sx));
        d = 1.0 - clamp01(best);
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    tau_cache_.emplace(x, d);
    return d;
}

double coverage(const SimilarityBackend& backend, const Corpus& corpus) {
    std::set<Token> vocabulary;
    for (const auto& pair : corpus.pairs) {
        vocabulary.insert(pair.source.vocab.begin(), pair.source.vocab.end());
        vocabulary.insert(pair.suspicious.vocab.begin(), pair.suspicious.vocab.end());
    }
    if (vocabulary.empty()) return 0.0;
    std::size_t known = 0;
    for (const auto& word : vocabulary)
        if (backend.knows(word)) ++known;
    return static_cast<double>(known) / static_cast<double>(vocabulary.size());
}

}  // namespace textsim
