#include <sstream>

#include "doctest.h"
#include "entity_embed/corpus.hpp"
#include "entity_embed/rng.hpp"
#include "entity_embed/vocab.hpp"

using namespace entity_embed;

namespace {

Document make_doc(std::vector<std::vector<std::string>> sentences,
                  std::vector<EntitySpan> spans = {}) {
    Document doc;
    doc.id = "t";
    for (auto& sent : sentences) {
        std::vector<Token> toks;
        for (auto& w : sent) toks.push_back(Token{std::move(w), "", false});
        doc.sentences.push_back(std::move(toks));
    }
    doc.entities = std::move(spans);
    return doc;
}

std::vector<std::string> texts(const std::vector<Token>& sent) {
    std::vector<std::string> out;
    for (const auto& t : sent) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("parse_annotated reads documents in order") {
    std::istringstream in(
        R"({"id":"d1","sentences":[{"tokens":[{"t":"Barack","pos":"NNP"},{"t":"spoke","pos":"VBD"}]},{"tokens":[{"t":"later","pos":"RB"}]}],"entities":[{"s":0,"b":0,"e":1,"type":"PER","kid":"Q76"}]})"
        "\n");
    const auto corpus = parse_annotated(in);
    REQUIRE(corpus.docs.size() == 1);
    const auto& doc = corpus.docs[0];
    CHECK(doc.id == "d1");
    REQUIRE(doc.sentences.size() == 2);
    CHECK(doc.sentences[0].size() == 2);
    REQUIRE(doc.entities.size() == 1);
    CHECK(doc.entities[0].type == EntityType::PER);
    CHECK(doc.entities[0].id == "Q76");
}

TEST_CASE("parse_annotated skips empty lines with a warning count") {
    std::istringstream in(
        "\n"
        R"({"id":"d","sentences":[{"tokens":[{"t":"x"}]}]})"
        "\n\n");
    const auto corpus = parse_annotated(in);
    CHECK(corpus.docs.size() == 1);
    CHECK(corpus.skipped_lines == 2);
}

TEST_CASE("parse_annotated rejects malformed lines with the line number") {
    std::istringstream in(
        R"({"id":"ok","sentences":[{"tokens":[{"t":"x"}]}]})"
        "\n"
        "{not json\n");
    CHECK_THROWS_WITH_AS(parse_annotated(in), doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("parse_annotated rejects out-of-range spans") {
    std::istringstream in(
        R"({"id":"d","sentences":[{"tokens":[{"t":"x"}]}],"entities":[{"s":0,"b":0,"e":2,"type":"LOC","kid":"Q1"}]})"
        "\n");
    CHECK_THROWS_AS(parse_annotated(in), std::runtime_error);
}

TEST_CASE("parse_annotated rejects overlapping spans") {
    std::istringstream in(
        R"({"id":"d","sentences":[{"tokens":[{"t":"a"},{"t":"b"},{"t":"c"}]}],"entities":[{"s":0,"b":0,"e":2,"type":"PER","kid":"Q1"},{"s":0,"b":1,"e":3,"type":"LOC","kid":"Q2"}]})"
        "\n");
    CHECK_THROWS_AS(parse_annotated(in), std::runtime_error);
}

TEST_CASE("parse_raw splits sentences on lines and tokens on whitespace") {
    std::istringstream in("The cat  sat\n\non the mat\n");
    const auto doc = parse_raw(in);
    REQUIRE(doc.sentences.size() == 2);
    CHECK(texts(doc.sentences[0]) == std::vector<std::string>{"The", "cat", "sat"});
    CHECK(texts(doc.sentences[1]) == std::vector<std::string>{"on", "the", "mat"});
}

TEST_CASE("filter_tokens removes stoplist words in RAW mode") {
    auto doc = make_doc({{"The", "cat", "sat"}});
    FilterConfig cfg;
    cfg.mode = PipelineMode::RAW;
    cfg.stoplist = {"the"};
    const auto out = filter_tokens(doc, cfg);
    CHECK(texts(out.sentences[0]) == std::vector<std::string>{"cat", "sat"});
}

TEST_CASE("filter_tokens removes punctuation in RAW mode") {
    auto doc = make_doc({{"cat", ",", "--", "sat", "."}});
    FilterConfig cfg;
    cfg.mode = PipelineMode::RAW;
    const auto out = filter_tokens(doc, cfg);
    CHECK(texts(out.sentences[0]) == std::vector<std::string>{"cat", "sat"});
}

TEST_CASE("filter_tokens removes blocked POS tags in ANNOTATED mode") {
    Document doc;
    doc.id = "t";
    doc.sentences.push_back({Token{"in", "IN", false}, Token{"Paris", "NNP", false}});
    const auto out = filter_tokens(doc, default_filter_config(PipelineMode::ANNOTATED));
    REQUIRE(out.sentences[0].size() == 1);
    CHECK(out.sentences[0][0].text == "paris");  // terms are lowercased
}

TEST_CASE("filter_tokens never removes tokens inside entity spans") {
    Document doc;
    doc.id = "t";
    doc.sentences.push_back(
        {Token{"of", "IN", false}, Token{"United", "IN", false}, Token{"States", "NNP", false}});
    doc.entities.push_back({0, 1, 3, EntityType::LOC, "Q30"});
    const auto out = filter_tokens(doc, default_filter_config(PipelineMode::ANNOTATED));
    // "of" dropped, the span tokens survive with remapped indices
    REQUIRE(out.sentences[0].size() == 2);
    CHECK(out.sentences[0][0].text == "United");
    CHECK(out.entities[0].begin == 0);
    CHECK(out.entities[0].end == 2);
}

TEST_CASE("filter_tokens keeps empty sentences") {
    auto doc = make_doc({{"the"}, {"cat"}});
    FilterConfig cfg;
    cfg.mode = PipelineMode::RAW;
    cfg.stoplist = {"the"};
    const auto out = filter_tokens(doc, cfg);
    REQUIRE(out.sentences.size() == 2);
    CHECK(out.sentences[0].empty());
    CHECK(out.sentences[1].size() == 1);
}

TEST_CASE("apply_annotations collapses spans to identifier tokens") {
    auto doc = make_doc({{"barack", "obama", "spoke"}}, {{0, 0, 2, EntityType::PER, "Q76"}});
    const auto out = apply_annotations(doc);
    CHECK(texts(out.sentences[0]) == std::vector<std::string>{"@PER:Q76", "spoke"});
    CHECK(out.sentences[0][0].entity);
    REQUIRE(out.entities.size() == 1);
    CHECK(out.entities[0].begin == 0);
    CHECK(out.entities[0].end == 1);
}

TEST_CASE("apply_annotations leaves span-free sentences unchanged") {
    auto doc = make_doc({{"just", "words"}});
    const auto out = apply_annotations(doc);
    CHECK(out.sentences == doc.sentences);
}

TEST_CASE("apply_annotations keeps adjacent spans in order") {
    auto doc = make_doc({{"paris", "berlin"}},
                        {{0, 0, 1, EntityType::LOC, "Q90"}, {0, 1, 2, EntityType::LOC, "Q64"}});
    const auto out = apply_annotations(doc);
    CHECK(texts(out.sentences[0]) == std::vector<std::string>{"@LOC:Q90", "@LOC:Q64"});
}

TEST_CASE("annotate-then-filter equals filter-then-annotate on unblocked entity POS") {
    // random documents whose entity tokens carry an unblocked tag
    Rng rng(7);
    const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "epsilon"};
    const std::vector<std::string> tags = {"NN", "VB", "IN", "PRP", "JJ"};
    const auto cfg = default_filter_config(PipelineMode::ANNOTATED);
    for (int trial = 0; trial < 50; ++trial) {
        Document doc;
        doc.id = "r";
        const int sentences = 1 + static_cast<int>(rng.bounded(3));
        for (int s = 0; s < sentences; ++s) {
            const int len = 3 + static_cast<int>(rng.bounded(5));
            std::vector<Token> sent;
            for (int t = 0; t < len; ++t)
                sent.push_back(Token{pool[rng.bounded(pool.size())],
                                     tags[rng.bounded(tags.size())], false});
            // one alternating-position span with an unblocked tag
            if (len >= 2 && rng.next_double() < 0.8) {
                const int b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(len - 1)));
                doc.entities.push_back({s, b, b + 2, EntityType::PER, "Q" + std::to_string(trial)});
                sent[static_cast<std::size_t>(b)].pos = "NNP";
                sent[static_cast<std::size_t>(b) + 1].pos = "NNP";
            }
            doc.sentences.push_back(std::move(sent));
        }
        validate_spans(doc);
        const auto a = filter_tokens(apply_annotations(doc), cfg);
        const auto b = apply_annotations(filter_tokens(doc, cfg));
        CHECK(a == b);
    }
}

TEST_CASE("build_vocabulary drops keys below min_count") {
    auto doc = make_doc({{"cat", "cat", "dog", "dog", "dog"}});
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 3);
    CHECK(vocab.size() == 1);
    CHECK(!vocab.find("cat").has_value());
    CHECK(vocab.find("dog").has_value());
}

TEST_CASE("build_vocabulary keeps everything at min_count 1") {
    auto doc = make_doc({{"a", "b", "c", "a"}});
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 1);
    CHECK(vocab.size() == 3);
}

TEST_CASE("build_vocabulary includes keys exactly at the threshold") {
    std::vector<std::vector<std::string>> sents(5, {"@LOC:Q64"});
    auto doc = make_doc(std::move(sents));
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 5);
    const auto idx = vocab.find("@LOC:Q64");
    REQUIRE(idx.has_value());
    CHECK(vocab.entry(*idx).freq == 5);
    CHECK(vocab.entry(*idx).kind == Kind::ENTITY);
    CHECK(vocab.entry(*idx).etype == EntityType::LOC);
}

TEST_CASE("build_vocabulary throws when nothing survives") {
    auto doc = make_doc({{"once"}});
    CHECK_THROWS_AS(Vocabulary::build(std::span(&doc, 1), 2), std::runtime_error);
}

TEST_CASE("vocabulary indices are dense, frequency-sorted, ties lexicographic") {
    auto doc = make_doc({{"b", "b", "a", "a", "c", "c", "c", "z"}});
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 1);
    REQUIRE(vocab.size() == 4);
    CHECK(vocab.entry(0).key == "c");
    CHECK(vocab.entry(1).key == "a");  // freq 2, before "b" lexicographically
    CHECK(vocab.entry(2).key == "b");
    CHECK(vocab.entry(3).key == "z");
    std::uint64_t freq_sum = 0;
    for (const auto& e : vocab.entries()) freq_sum += e.freq;
    CHECK(freq_sum <= vocab.total_tokens());
}

TEST_CASE("build_vocabulary is deterministic across runs") {
    std::vector<Document> docs;
    Rng rng(99);
    const std::vector<std::string> pool = {"w1", "w2", "w3", "w4", "w5", "w6"};
    for (int d = 0; d < 20; ++d) {
        std::vector<std::vector<std::string>> sents;
        for (int s = 0; s < 3; ++s) {
            std::vector<std::string> sent;
            for (int t = 0; t < 6; ++t) sent.push_back(pool[rng.bounded(pool.size())]);
            sents.push_back(std::move(sent));
        }
        docs.push_back(make_doc(std::move(sents)));
    }
    const auto v1 = Vocabulary::build(docs, 2);
    const auto v2 = Vocabulary::build(docs, 2);
    REQUIRE(v1.size() == v2.size());
    for (std::size_t i = 0; i < v1.size(); ++i) {
        CHECK(v1.entry(static_cast<Index>(i)).key == v2.entry(static_cast<Index>(i)).key);
        CHECK(v1.entry(static_cast<Index>(i)).freq == v2.entry(static_cast<Index>(i)).freq);
    }
}

TEST_CASE("index_document skips out-of-vocabulary tokens") {
    auto doc = make_doc({{"a", "a", "rare", "b", "b"}});
    const auto vocab = Vocabulary::build(std::span(&doc, 1), 2);
    const auto indexed = vocab.index_document(doc);
    REQUIRE(indexed.sentences.size() == 1);
    CHECK(indexed.sentences[0].size() == 4);
}

}  // TEST_SUITE
