#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "testutil.hpp"
#include "textsim/error.hpp"
#include "textsim/wordsim.hpp"

using namespace textsim;

namespace {

const std::string kFixtures = FIXTURE_DIR;

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = "textsim_ws_" + std::to_string(counter++) + ".tmp";
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace

TEST_CASE("exact backend: sim is equality, dist its complement, tau constant") {
    ExactMatchBackend backend;
    CHECK(backend.sim("question", "question") == 1.0);
    CHECK(backend.sim("question", "query") == 0.0);
    CHECK(backend.dist("a", "a") == 0.0);
    CHECK(backend.dist("a", "b") == 1.0);
    CHECK(backend.tau_dist("anything") == 1.0);
    CHECK(backend.knows("whatever"));
}

TEST_CASE("embedding cosine: orthogonal, identical and negative vectors") {
    EmbeddingBackend backend(load_embeddings(kFixtures + "/vectors_2d.txt"));
    CHECK(backend.sim("x", "y") == 0.0);
    CHECK(backend.sim("x", "same") == 1.0);
    CHECK(backend.sim("x", "x") == 1.0);
    CHECK(backend.dist("x", "y") == 1.0);
    // raw cosine -1 clamps to 0
    CHECK(backend.sim("x", "neg") == 0.0);
}

TEST_CASE("embedding oov policies") {
    EmbeddingBackend fallback(load_embeddings(kFixtures + "/vectors_2d.txt"),
                              OovPolicy::ExactFallback);
    CHECK(fallback.sim("missing", "missing") == 1.0);
    CHECK(fallback.sim("missing", "x") == 0.0);
    CHECK(fallback.tau_dist("missing") == 1.0);
    CHECK_FALSE(fallback.knows("missing"));

    EmbeddingBackend zero(load_embeddings(kFixtures + "/vectors_2d.txt"), OovPolicy::Zero);
    CHECK(zero.sim("missing", "missing") == 0.0);
    CHECK(zero.sim("missing", "x") == 0.0);
    CHECK(zero.tau_dist("missing") == 1.0);
}

TEST_CASE("load_embeddings parses the fixture table") {
    const EmbeddingTable table = load_embeddings(kFixtures + "/vectors_2d.txt");
    CHECK(table.dimension == 2);
    CHECK(table.words.size() == 4);
    CHECK(table.duplicate_count == 0);
    REQUIRE(table.find("y") != nullptr);
    CHECK((*table.find("y"))[1] == 1.0);
}

TEST_CASE("load_embeddings errors name the offending line") {
    TempFile short_row("2 2\na 1 0\nb 1\n");
    CHECK_THROWS_WITH_AS(load_embeddings(short_row.path()), doctest::Contains(":3"), Error);
    TempFile bad_float("1 2\na 1 oops\n");
    CHECK_THROWS_WITH_AS(load_embeddings(bad_float.path()),
                         doctest::Contains("unparsable"), Error);
    TempFile non_finite("1 2\na 1 nan\n");
    CHECK_THROWS_AS(load_embeddings(non_finite.path()), Error);
    TempFile empty("0 2\n");
    CHECK_THROWS_WITH_AS(load_embeddings(empty.path()), doctest::Contains("no entries"),
                         Error);
}

TEST_CASE("duplicate embedding rows: last wins and a warning is counted") {
    TempFile file("3 2\na 1 0\nb 0 1\na 0 1\n");
    const EmbeddingTable table = load_embeddings(file.path());
    CHECK(table.words.size() == 2);
    CHECK(table.duplicate_count == 1);
    CHECK((*table.find("a"))[0] == 0.0);
    CHECK((*table.find("a"))[1] == 1.0);
}

TEST_CASE("embedding tau: frequent words sit near the centroid") {
    EmbeddingBackend backend(load_embeddings(kFixtures + "/tau_vectors.txt"),
                             OovPolicy::ExactFallback, /*tau_top_k=*/4);
    const double d_the = backend.tau_dist("the");
    const double d_photo = backend.tau_dist("photosynthesis");
    CHECK(d_the < d_photo);
    // regression values computed independently on this fixture
    CHECK(d_the == doctest::Approx(0.000887024684575688).epsilon(1e-9));
    CHECK(d_photo == doctest::Approx(0.9393316203168516).epsilon(1e-9));
}

TEST_CASE("toy taxonomy: depths, wup similarity and dist") {
    const Taxonomy tax = load_taxonomy(kFixtures + "/taxonomy_toy.txt");
    CHECK(tax.depth[tax.node_index.at("root")] == 1);
    CHECK(tax.depth[tax.node_index.at("animal")] == 2);
    CHECK(tax.depth[tax.node_index.at("dog_s")] == 3);
    CHECK(tax.depth[tax.node_index.at("cat_s")] == 3);

    TaxonomyBackend backend(tax);
    CHECK(backend.sim("dog", "cat") == doctest::Approx(2.0 * 2.0 / 6.0));
    CHECK(backend.dist("dog", "cat") == doctest::Approx(1.0 - 2.0 * 2.0 / 6.0));
    CHECK(backend.sim("dog", "dog") == 1.0);
    CHECK(backend.knows("dog"));
    CHECK_FALSE(backend.knows("fish"));
}

TEST_CASE("taxonomy cycle and dangling references are rejected") {
    TempFile cycle("edge\ta\tb\nedge\tb\ta\nedge\ta\troot\n");
    CHECK_THROWS_WITH_AS(load_taxonomy(cycle.path()), doctest::Contains("cycle"), Error);
    TempFile dangling("edge\ta\troot\nword\tdog\tmissing\n");
    CHECK_THROWS_WITH_AS(load_taxonomy(dangling.path()),
                         doctest::Contains("unknown synset"), Error);
    TempFile two_roots("edge\ta\tr1\nedge\tb\tr2\n");
    CHECK_THROWS_WITH_AS(load_taxonomy(two_roots.path()),
                         doctest::Contains("exactly one root"), Error);
}

TEST_CASE("multi-synset words take the max over synset pairs") {
    // "bank" maps to a deep synset next to "shore" and to a shallow one;
    // the deep pairing scores higher and must win
    TempFile file(
        "edge\tnature\troot\n"
        "edge\twater\tnature\n"
        "edge\triver_bank\twater\n"
        "edge\tshore_s\twater\n"
        "edge\tmoney_bank\troot\n"
        "word\tbank\triver_bank\n"
        "word\tbank\tmoney_bank\n"
        "word\tshore\tshore_s\n");
    const Taxonomy tax = load_taxonomy(file.path());
    TaxonomyBackend backend(tax);
    // river_bank/shore_s: mcs water depth 3, both depth 4 -> 6/8
    // money_bank/shore_s: mcs root depth 1, depths 2+4 -> 2/6
    const double deep = 2.0 * 3.0 / 8.0;
    const double shallow = 2.0 * 1.0 / 6.0;
    CHECK(backend.wup(tax.node_index.at("river_bank"), tax.node_index.at("shore_s")) ==
          doctest::Approx(deep));
    CHECK(backend.wup(tax.node_index.at("money_bank"), tax.node_index.at("shore_s")) ==
          doctest::Approx(shallow));
    CHECK(backend.sim("bank", "shore") == doctest::Approx(deep));
}

TEST_CASE("multi-parent synsets take 1 + min parent depth") {
    TempFile file(
        "edge\ta\troot\n"
        "edge\tb\ta\n"
        "edge\tc\tb\n"
        "edge\tx\tc\n"
        "edge\tx\ta\n"
        "word\tw\tx\n");
    const Taxonomy tax = load_taxonomy(file.path());
    CHECK(tax.depth[tax.node_index.at("x")] == 3);  // via a, not via c
}

TEST_CASE("taxonomy tau: deeper words are farther from a general synset") {
    TempFile file(
        "edge\tentity\troot\n"
        "edge\tthing\troot\n"
        "edge\tdog_s\tthing\n"
        "word\tthing\tthing\n"
        "word\tdog\tdog_s\n");
    TaxonomyBackend backend(load_taxonomy(file.path()), OovPolicy::ExactFallback,
                            std::string("entity"));
    // wup(entity, thing) = 2/(2+2), wup(entity, dog_s) = 2/(2+3)
    CHECK(backend.tau_dist("thing") == doctest::Approx(0.5));
    CHECK(backend.tau_dist("dog") == doctest::Approx(0.6));
    CHECK(backend.tau_dist("dog") > backend.tau_dist("thing"));
    CHECK(backend.tau_dist("unknown_word") == 1.0);
}

TEST_CASE("default tau synset is the root's single child when unique") {
    TempFile single(
        "edge\tentity\troot\n"
        "edge\tdog_s\tentity\n"
        "word\tdog\tdog_s\n"
        "word\tentity\tentity\n");
    TaxonomyBackend backend(load_taxonomy(single.path()));
    // tau = entity: wup(entity, entity) = 1
    CHECK(backend.tau_dist("entity") == 0.0);
}

TEST_CASE("precomputed depths match a brute-force search on random dags") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        // random DAG: node i picks 1-2 parents among 0..i-1 (0 is the root)
        const std::size_t n = 3 + rng() % 10;
        std::string spec;
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t n_parents = 1 + rng() % 2;
            std::set<std::size_t> parents;
            while (parents.size() < std::min(n_parents, i))
                parents.insert(rng() % i);
            for (const auto p : parents)
                spec += "edge\tn" + std::to_string(i) + "\tn" + std::to_string(p) + "\n";
        }
        TempFile file(spec);
        const Taxonomy tax = load_taxonomy(file.path());
        for (std::uint32_t node = 0; node < tax.node_ids.size(); ++node)
            CHECK(tax.depth[node] == oracle::depth_by_search(tax, node));
    }
}

TEST_CASE("wup on a chain: a deeper mcs never decreases similarity") {
    // chain root -> c1 -> c2 -> c3 -> c4; words at c4 under different branches
    TempFile file(
        "edge\tc1\troot\n"
        "edge\tc2\tc1\n"
        "edge\tc3\tc2\n"
        "edge\tl1\tc1\n"
        "edge\tl2\tc2\n"
        "edge\tl3\tc3\n"
        "edge\tr1\tc1\n"
        "edge\tr2\tc2\n"
        "edge\tr3\tc3\n"
        "word\tleft1\tl1\nword\tleft2\tl2\nword\tleft3\tl3\n"
        "word\tright1\tr1\nword\tright2\tr2\nword\tright3\tr3\n");
    const Taxonomy tax = load_taxonomy(file.path());
    TaxonomyBackend backend(load_taxonomy(file.path()));
    // siblings at equal depth d with mcs at depth m: wup = 2m/(2d); deeper m wins
    const double s1 = backend.sim("left2", "right2");  // mcs c2 (depth 3), depths 4+4
    const double s2 = backend.sim("left3", "right3");  // mcs c3 (depth 4), depths 5+5
    CHECK(s1 == doctest::Approx(6.0 / 8.0));
    CHECK(s2 == doctest::Approx(8.0 / 10.0));
    CHECK(s2 >= s1);
}

TEST_CASE("sim is symmetric, bounded, and dist is its complement") {
    std::mt19937 rng(31);
    const EmbeddingBackend embedding(load_embeddings(kFixtures + "/tau_vectors.txt"));
    const TaxonomyBackend wup(load_taxonomy(kFixtures + "/taxonomy_toy.txt"));
    const ExactMatchBackend exact;
    const std::vector<const SimilarityBackend*> backends{&embedding, &wup, &exact};
    const std::vector<std::string> words{"the", "of",  "photosynthesis", "dog",
                                         "cat", "oov", "x"};
    for (int trial = 0; trial < 500; ++trial) {
        const auto& backend = *backends[rng() % backends.size()];
        const auto& x = words[rng() % words.size()];
        const auto& y = words[rng() % words.size()];
        const double s = backend.sim(x, y);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(s == backend.sim(y, x));
        CHECK(backend.dist(x, y) == 1.0 - s);
        const double t = backend.tau_dist(x);
        CHECK(t >= 0.0);
        CHECK(t <= 1.0);
    }
}

TEST_CASE("coverage counts known corpus vocabulary") {
    Corpus corpus;
    corpus.pairs.push_back({"a", testutil::doc({"dog", "cat"}), testutil::doc({"dog"}),
                            Label::Plagiarism, ParaphraseCategory::Unlabeled});
    const ExactMatchBackend exact;
    CHECK(coverage(exact, corpus) == 1.0);

    const TaxonomyBackend wup(load_taxonomy(kFixtures + "/taxonomy_toy.txt"));
    CHECK(coverage(wup, corpus) == 1.0);

    corpus.pairs.push_back({"b", testutil::doc({"quark", "gluon"}),
                            testutil::doc({"boson"}), Label::NotPlagiarism,
                            ParaphraseCategory::Unlabeled});
    // vocabulary {dog, cat, quark, gluon, boson}: wup knows 2 of 5
    CHECK(coverage(wup, corpus) == doctest::Approx(0.4));

    const EmbeddingBackend embedding(load_embeddings(kFixtures + "/vectors_2d.txt"));
    CHECK(coverage(embedding, corpus) == 0.0);
}
