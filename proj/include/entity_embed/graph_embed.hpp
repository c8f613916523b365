#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entity_embed/cooc.hpp"
#include "entity_embed/model.hpp"
#include "entity_embed/rng.hpp"
#include "entity_embed/sgns.hpp"

namespace entity_embed {

// Edge-weight normalization for walk transitions: identity, or log1p to
// dampen heavy edges while keeping weights <= 1 positive.
enum class WeightNorm { ID, LOG };

struct WalkConfig {
    int walks_per_node = 100;
    int walk_length = 4;  // nodes per walk, including the start
    WeightNorm weight_norm = WeightNorm::ID;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct VerseConfig {
    int dim = 100;
    int negatives = 16;
    double learning_rate = 0.025;
    std::uint64_t samples = 50000;  // sampling rounds per node on average
    bool weighted_positives = false;  // draw positives by edge weight instead of uniformly
    std::uint64_t seed = 1;
    int workers = 1;
};

// P(j | i) proportional to f(e_ij); aligned with g.neighbors(i). Throws for
// isolated nodes.
std::vector<double> transition_distribution(const CoocGraph& g, Index node, WeightNorm norm);

// Walk of cfg.walk_length nodes starting at `start`, each step sampled from
// the transition distribution at the current node.
std::vector<Index> random_walk(const CoocGraph& g, Index start, const WalkConfig& cfg, Rng& rng);

// walks_per_node walks from every non-isolated node, one walk per sentence.
// Each walk runs on its own derived substream, so the corpus is identical for
// any worker count.
IndexedCorpus generate_walk_corpus(const CoocGraph& g, const WalkConfig& cfg);

// Walks fed to the skip-gram trainer with window = walk_length.
EmbeddingModel deepwalk_train(const CoocGraph& g, const WalkConfig& wcfg, SgnsConfig scfg,
                              TrainStats* stats = nullptr);

// Adjacency similarity: 1/out(i) per neighbor, 0 elsewhere; aligned with
// g.neighbors(i). Throws for isolated nodes.
std::vector<double> verse_similarity_row(const CoocGraph& g, Index node);

// Logistic loss of one sampling round: positive pair (u, v) plus uniform
// noise nodes. VERSE keeps a single table, so both sides index model.center.
double verse_round_loss(const EmbeddingModel& model, Index u, Index v,
                        std::span<const Index> negatives);

double verse_round_update(EmbeddingModel& model, Index u, Index v,
                          std::span<const Index> negatives, double learning_rate);

// Noise-contrastive training over cfg.samples * num_nodes rounds; positives
// drawn per verse_similarity_row, noise uniform over all nodes.
EmbeddingModel verse_train(const CoocGraph& g, const VerseConfig& cfg, TrainStats* stats = nullptr);

}  // namespace entity_embed
