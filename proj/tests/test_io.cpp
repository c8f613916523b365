#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "entity_embed/io.hpp"
#include "entity_embed/pca.hpp"
#include "helpers.hpp"

using namespace entity_embed;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

KeyedVectors random_keyed(std::size_t n, int dim, Rng& rng) {
    std::vector<std::string> keys;
    std::vector<double> data;
    for (std::size_t i = 0; i < n; ++i) {
        keys.push_back(i % 3 == 0 ? "@PER:Q" + std::to_string(i) : "w" + std::to_string(i));
        for (int k = 0; k < dim; ++k) data.push_back(test_support::gaussian(rng));
    }
    return KeyedVectors(std::move(keys), dim, std::move(data));
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("embedding files round-trip exactly in both formats") {
    Rng rng(151);
    for (int trial = 0; trial < 5; ++trial) {
        const auto vec = random_keyed(3 + rng.bounded(20), 2 + static_cast<int>(rng.bounded(12)), rng);
        TempFile text("ee_roundtrip.txt"), binary("ee_roundtrip.bin");
        io::save_embeddings_text(vec, text.path);
        io::save_embeddings_binary(vec, binary.path);
        for (const auto& path : {text.path, binary.path}) {
            const auto loaded = io::load_embeddings(path);
            REQUIRE(loaded.size() == vec.size());
            REQUIRE(loaded.dim() == vec.dim());
            CHECK(loaded.keys() == vec.keys());
            CHECK(loaded.data() == vec.data());  // %.17g and raw bytes both round-trip
        }
    }
}

TEST_CASE("vocabulary TSV round-trips with kinds and types") {
    Document doc;
    doc.id = "d";
    doc.sentences.push_back({Token{"alpha", "", false}, Token{"alpha", "", false},
                             Token{"@LOC:Q64", "", true}, Token{"beta", "", false}});
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 1);
    TempFile file("ee_vocab.tsv");
    io::save_vocab_tsv(vocab, file.path);
    const auto loaded = io::load_vocab_tsv(file.path);
    REQUIRE(loaded.size() == vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto& a = vocab.entry(static_cast<Index>(i));
        const auto& b = loaded.entry(static_cast<Index>(i));
        CHECK(a.key == b.key);
        CHECK(a.kind == b.kind);
        CHECK(a.etype == b.etype);
        CHECK(a.freq == b.freq);
    }
}

TEST_CASE("graph TSV round-trips the adjacency") {
    Rng rng(157);
    const auto g = test_support::random_graph(15, rng);
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) keys.push_back("n" + std::to_string(i));
    TempFile file("ee_graph.tsv");
    io::save_graph_tsv(g, keys, file.path);

    const auto loaded = io::load_graph_tsv(file.path);
    CHECK(loaded.graph.num_edges() == g.num_edges());
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        for (const auto& [j, w] : g.neighbors(static_cast<Index>(i))) {
            std::size_t li = 0, lj = 0;
            for (std::size_t k = 0; k < loaded.keys.size(); ++k) {
                if (loaded.keys[k] == keys[i]) li = k;
                if (loaded.keys[k] == keys[static_cast<std::size_t>(j)]) lj = k;
            }
            CHECK(loaded.graph.weight(static_cast<Index>(li), static_cast<Index>(lj)) == w);
        }

    // header carries the counts
    std::ifstream in(file.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "#nodes=" + std::to_string(graph_stats(g).nodes) +
                        " edges=" + std::to_string(g.num_edges()));
}

TEST_CASE("corpus cache round-trips documents and mode") {
    IndexedCorpus corpus;
    corpus.push_back({"doc one", {{0, 1, 2}, {}, {3}}});
    corpus.push_back({"doc two", {{4, 4, 4}}});
    TempFile file("ee_cache.txt");
    io::save_corpus_cache(corpus, PipelineMode::ANNOTATED, file.path);
    const auto loaded = io::load_corpus_cache(file.path);
    CHECK(loaded.mode == PipelineMode::ANNOTATED);
    REQUIRE(loaded.corpus.size() == 2);
    CHECK(loaded.corpus[0].id == "doc one");
    CHECK(loaded.corpus[0].sentences == corpus[0].sentences);
    CHECK(loaded.corpus[1].sentences == corpus[1].sentences);
}

TEST_CASE("relatedness and categorization TSV loaders parse fields") {
    TempFile rel("ee_rel.tsv");
    {
        std::ofstream out(rel.path);
        out << "tiger\tcat\t7.35\n\n# comment\nbook\tpaper\t5.5\n";
    }
    const auto ds = io::load_relatedness_tsv(rel.path);
    REQUIRE(ds.pairs.size() == 2);
    CHECK(ds.pairs[0].w1 == "tiger");
    CHECK(ds.pairs[0].score == 7.35);

    TempFile cat("ee_cat.tsv");
    {
        std::ofstream out(cat.path);
        out << "@LOC:Q64\tgerman\nparis\tfrench\n";
    }
    const auto cds = io::load_categorization_tsv(cat.path);
    REQUIRE(cds.items.size() == 2);
    CHECK(cds.num_categories() == 2);
}

TEST_CASE("analogy loader understands sections and type annotations") {
    TempFile file("ee_analogy.txt");
    {
        std::ofstream out(file.path);
        out << ": capital-common #type=LOC\n";
        out << "athens greece berlin germany\n";
        out << ": plain-section\n";
        out << "good better bad worse\n";
    }
    const auto ds = io::load_analogy(file.path);
    REQUIRE(ds.items.size() == 2);
    CHECK(ds.items[0].type == EntityType::LOC);
    CHECK(ds.items[0].a == "athens");
    CHECK(!ds.items[1].type.has_value());
}

TEST_CASE("malformed dataset lines name the line number") {
    TempFile file("ee_bad.tsv");
    {
        std::ofstream out(file.path);
        out << "alpha\tbeta\t0.5\nalpha beta 0.5\n";
    }
    CHECK_THROWS_WITH_AS(io::load_relatedness_tsv(file.path), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("loaders reject non-finite scores and degenerate analogy items") {
    TempFile rel("ee_inf.tsv");
    {
        std::ofstream out(rel.path);
        out << "a\tb\t1e999\n";
    }
    CHECK_THROWS_AS(io::load_relatedness_tsv(rel.path), std::runtime_error);

    TempFile ana("ee_dup.txt");
    {
        std::ofstream out(ana.path);
        out << "same same other target\n";
    }
    CHECK_THROWS_AS(io::load_analogy(ana.path), std::runtime_error);
}

TEST_CASE("projection of collinear vectors has a zero second component") {
    std::vector<double> data;
    for (int i = 0; i < 5; ++i) {
        const double t = 1.0 + i;
        data.push_back(2.0 * t);
        data.push_back(-1.0 * t);
        data.push_back(0.5 * t);
    }
    const auto proj = project_top2(data, 5, 3);
    REQUIRE(proj.coords.size() == 5);
    for (const auto& c : proj.coords) CHECK(std::abs(c[1]) <= 1e-9);
}

TEST_CASE("projection separates two blobs along the first component") {
    Rng rng(163);
    std::vector<double> data;
    for (int i = 0; i < 20; ++i) {
        const double offset = i < 10 ? 8.0 : -8.0;
        data.push_back(offset + 0.1 * test_support::gaussian(rng));
        for (int k = 1; k < 6; ++k) data.push_back(0.1 * test_support::gaussian(rng));
    }
    const auto proj = project_top2(data, 20, 6);
    for (int i = 0; i < 20; ++i) CHECK((proj.coords[static_cast<std::size_t>(i)][0] > 0) == (i < 10));
    CHECK(proj.eigenvalues[0] > proj.eigenvalues[1]);
}

TEST_CASE("projection rejects fewer than three vectors") {
    std::vector<double> data{1, 2, 3, 4};
    CHECK_THROWS_AS(project_top2(data, 2, 2), std::invalid_argument);
}

TEST_CASE("projection scores behave like principal components") {
    Rng rng(167);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 8 + rng.bounded(30);
        const int dim = 3 + static_cast<int>(rng.bounded(10));
        std::vector<double> data(n * static_cast<std::size_t>(dim));
        for (auto& v : data) v = test_support::gaussian(rng);
        const auto proj = project_top2(data, n, dim);

        // components are ordered, score columns are centered and uncorrelated,
        // and each column's variance recovers its eigenvalue
        CHECK(proj.eigenvalues[0] >= proj.eigenvalues[1]);
        CHECK(proj.eigenvalues[1] >= -1e-9);
        double mean1 = 0, mean2 = 0, cross = 0, var1 = 0, var2 = 0;
        for (const auto& c : proj.coords) {
            mean1 += c[0];
            mean2 += c[1];
            cross += c[0] * c[1];
            var1 += c[0] * c[0];
            var2 += c[1] * c[1];
        }
        const auto nn = static_cast<double>(n);
        CHECK(std::abs(mean1 / nn) <= 1e-9);
        CHECK(std::abs(mean2 / nn) <= 1e-9);
        CHECK(std::abs(cross / nn) <= 1e-6 * std::sqrt(var1 * var2) / nn + 1e-9);
        CHECK(var1 / (nn - 1.0) == doctest::Approx(proj.eigenvalues[0]).epsilon(1e-6));
        CHECK(var2 / (nn - 1.0) == doctest::Approx(proj.eigenvalues[1]).epsilon(1e-6));
    }
}

}  // TEST_SUITE
