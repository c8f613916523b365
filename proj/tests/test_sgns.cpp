#include <cmath>

#include "doctest.h"
#include "entity_embed/sgns.hpp"
#include "gradcheck.hpp"
#include "helpers.hpp"

using namespace entity_embed;
using test_support::topic_cosines;
using test_support::two_topic_corpus;

TEST_SUITE("sgns") {

TEST_CASE("generate_pairs on a 2-token sentence with window 1") {
    Rng rng(1);
    const std::vector<Index> sent{7, 9};
    const auto pairs = generate_pairs(sent, 1, rng);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == std::pair<Index, Index>{7, 9});
    CHECK(pairs[1] == std::pair<Index, Index>{9, 7});
}

TEST_CASE("generate_pairs on a singleton sentence is empty") {
    Rng rng(1);
    const std::vector<Index> sent{3};
    CHECK(generate_pairs(sent, 5, rng).empty());
}

TEST_CASE("generate_pairs with fixed radius 2 enumerates all ordered pairs") {
    Rng rng(1);
    const std::vector<Index> sent{0, 1, 2};
    const auto pairs = generate_pairs(sent, 2, rng, /*dynamic=*/false);
    const std::vector<std::pair<Index, Index>> expected{{0, 1}, {0, 2}, {1, 0},
                                                        {1, 2}, {2, 0}, {2, 1}};
    CHECK(pairs == expected);
}

TEST_CASE("pairs never cross sentence ends") {
    Rng rng(5);
    const std::vector<Index> sent{0, 1, 2, 3};
    for (int trial = 0; trial < 20; ++trial) {
        const auto pairs = generate_pairs(sent, 10, rng);
        for (const auto& [c, o] : pairs) {
            CHECK(c >= 0);
            CHECK(c <= 3);
            CHECK(o >= 0);
            CHECK(o <= 3);
        }
    }
}

TEST_CASE("loss at zero parameters is (1 + negatives) * log 2") {
    auto model = EmbeddingModel::make(4, 8, true, false);
    const std::vector<Index> negatives{2};
    CHECK(sgns_loss(model, 0, 1, negatives) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("update returns the pre-update loss") {
    Rng rng(3);
    auto model = gradcheck::random_model(6, 5, true, false, rng);
    const std::vector<Index> negatives{3, 4};
    const double before = sgns_loss(model, 0, 1, negatives);
    EmbeddingModel copy = model;
    CHECK(sgns_update(copy, 0, 1, negatives, 0.05) == before);
    CHECK(sgns_loss(copy, 0, 1, negatives) < before);
}

TEST_CASE("step gradients match finite differences") {
    Rng rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial)
        worst = std::max(worst, gradcheck::sgns_gradient_error(5, rng));
    CHECK(worst <= 1e-5);
}

TEST_CASE("repeated positive pair with no negatives converges to sigma = 1") {
    Rng rng(7);
    auto model = EmbeddingModel::make(2, 5, true, false);
    for (double& v : model.center) v = rng.uniform(-0.1, 0.1);
    const std::vector<Index> none;
    for (int it = 0; it < 20000; ++it) sgns_update(model, 0, 1, none, 0.1);
    double dot = 0.0;
    for (int k = 0; k < 5; ++k)
        dot += model.center[static_cast<std::size_t>(k)] *
               model.context[5 + static_cast<std::size_t>(k)];
    CHECK(1.0 / (1.0 + std::exp(-dot)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("negative sampler probabilities sum to 1 with positive mass everywhere") {
    const std::vector<std::uint64_t> counts{5, 1, 40, 7, 2, 2, 9};
    const NegativeSampler sampler(counts, 0.75);
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double p = sampler.probability(static_cast<Index>(i));
        CHECK(p > 0.0);
        sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("negative sampler empirical frequencies track frequency^0.75") {
    Rng rng(123);
    std::vector<std::uint64_t> counts(60);
    for (auto& c : counts) c = 1 + rng.bounded(500);
    const NegativeSampler sampler(counts, 0.75);
    std::vector<std::uint64_t> hits(counts.size(), 0);
    const int draws = 1000000;
    for (int d = 0; d < draws; ++d) ++hits[static_cast<std::size_t>(sampler.sample(rng))];
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double empirical = static_cast<double>(hits[i]) / draws;
        CHECK(std::abs(empirical - sampler.probability(static_cast<Index>(i))) <= 0.01);
    }
}

TEST_CASE("training twice with one worker and a fixed seed is bit-identical") {
    const auto corpus = two_topic_corpus(10, 20, 6, 42);
    SgnsConfig cfg;
    cfg.dim = 8;
    cfg.window = 3;
    cfg.negatives = 4;
    cfg.epochs = 3;
    cfg.seed = 9;
    const auto a = train_sgns(corpus, 20, cfg);
    const auto b = train_sgns(corpus, 20, cfg);
    CHECK(a.center == b.center);
    CHECK(a.context == b.context);
}

TEST_CASE("two-topic corpus separates in mean cosine") {
    const auto corpus = two_topic_corpus(20, 60, 8, 5);
    SgnsConfig cfg;
    cfg.dim = 16;
    cfg.window = 4;
    cfg.negatives = 5;
    cfg.epochs = 8;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;
    const auto model = train_sgns(corpus, 40, cfg);
    std::vector<std::string> keys;
    for (int i = 0; i < 40; ++i) keys.push_back("w" + std::to_string(i));
    const auto cos = topic_cosines(publish(model, keys, PublishMode::CENTER), 20);
    CHECK(cos.intra > cos.inter);
}

TEST_CASE("epoch mean loss is non-increasing over the first five epochs") {
    const auto corpus = two_topic_corpus(15, 40, 6, 77);
    SgnsConfig cfg;
    cfg.dim = 12;
    cfg.window = 3;
    cfg.negatives = 4;
    cfg.epochs = 5;
    cfg.seed = 4;
    TrainStats stats;
    train_sgns(corpus, 30, cfg, &stats);
    REQUIRE(stats.epoch_loss.size() == 5);
    for (std::size_t e = 1; e < stats.epoch_loss.size(); ++e)
        CHECK(stats.epoch_loss[e] <= stats.epoch_loss[e - 1] * 1.01);
}

TEST_CASE("trained tables contain no NaN or infinity") {
    const auto corpus = two_topic_corpus(10, 20, 5, 6);
    SgnsConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 4;
    cfg.window = 2;
    cfg.negatives = 3;
    const auto model = train_sgns(corpus, 20, cfg);
    CHECK(model.all_finite());
}

TEST_CASE("a corpus of one repeated sentence pulls the pair together") {
    IndexedCorpus corpus;
    IndexedDocument doc;
    doc.id = "rep";
    for (int i = 0; i < 50; ++i) doc.sentences.push_back({0, 1});
    corpus.push_back(std::move(doc));
    SgnsConfig cfg;
    cfg.dim = 6;
    cfg.window = 1;
    cfg.negatives = 1;
    cfg.epochs = 20;
    cfg.learning_rate = 0.05;
    const auto model = train_sgns(corpus, 2, cfg);
    double dot = 0.0, nc = 0.0, nx = 0.0;
    for (int k = 0; k < 6; ++k) {
        const double a = model.center[static_cast<std::size_t>(k)];
        const double b = model.context[6 + static_cast<std::size_t>(k)];
        dot += a * b;
        nc += a * a;
        nx += b * b;
    }
    CHECK(dot / std::sqrt(nc * nx) > 0.0);
}

TEST_CASE("parallel training produces finite, usable tables") {
    const auto corpus = two_topic_corpus(15, 40, 6, 8);
    SgnsConfig cfg;
    cfg.dim = 8;
    cfg.window = 3;
    cfg.negatives = 4;
    cfg.epochs = 4;
    cfg.workers = 2;
    const auto model = train_sgns(corpus, 30, cfg);
    CHECK(model.all_finite());
    std::vector<std::string> keys;
    for (int i = 0; i < 30; ++i) keys.push_back("w" + std::to_string(i));
    const auto cos = topic_cosines(publish(model, keys, PublishMode::CENTER), 15);
    CHECK(cos.intra > cos.inter);
}

TEST_CASE("empty corpus is rejected") {
    IndexedCorpus corpus;
    CHECK_THROWS_AS(train_sgns(corpus, 4, SgnsConfig{}), std::runtime_error);
}

TEST_CASE("frequent-token subsampling is off by default and trains when enabled") {
    const auto corpus = two_topic_corpus(10, 30, 6, 21);
    SgnsConfig cfg;
    cfg.dim = 6;
    cfg.window = 2;
    cfg.negatives = 3;
    cfg.epochs = 2;
    cfg.seed = 2;
    TrainStats off_stats, on_stats;
    train_sgns(corpus, 20, cfg, &off_stats);
    cfg.subsample = 1e-3;  // aggressive at this corpus size
    const auto model = train_sgns(corpus, 20, cfg, &on_stats);
    CHECK(model.all_finite());
    // subsampling drops frequent tokens, so fewer pairs contribute per epoch
    CHECK(on_stats.epoch_loss.size() == off_stats.epoch_loss.size());
}

}  // TEST_SUITE
