#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "entity_embed/model.hpp"
#include "entity_embed/rng.hpp"
#include "entity_embed/types.hpp"

namespace entity_embed {

struct SgnsConfig {
    int dim = 100;
    int window = 10;
    int negatives = 8;  // 16 on annotated pipelines, 64 for DeepWalk
    double learning_rate = 0.015;
    int epochs = 100;
    double unigram_power = 0.75;
    double subsample = 0.0;  // frequent-token subsampling threshold, 0 disables
    std::uint64_t seed = 1;
    int workers = 1;
};

// Noise distribution proportional to frequency^power, sampled by binary
// search over the cumulative table.
class NegativeSampler {
public:
    NegativeSampler(std::span<const std::uint64_t> counts, double power);

    Index sample(Rng& rng) const;
    double probability(Index i) const;
    std::size_t size() const { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
};

// Calls fn(center, context) for every pair within a per-center dynamic
// radius r drawn uniformly from 1..window. Pairs never cross sentence ends.
template <typename Fn>
void for_each_context_pair(std::span<const Index> sentence, int window, Rng& rng, bool dynamic,
                           Fn&& fn) {
    const int n = static_cast<int>(sentence.size());
    for (int i = 0; i < n; ++i) {
        const int r = dynamic ? 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(window)))
                              : window;
        const int lo = i - r < 0 ? 0 : i - r;
        const int hi = i + r >= n ? n - 1 : i + r;
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            fn(sentence[static_cast<std::size_t>(i)], sentence[static_cast<std::size_t>(j)]);
        }
    }
}

std::vector<std::pair<Index, Index>> generate_pairs(std::span<const Index> sentence, int window,
                                                    Rng& rng, bool dynamic = true);

// L = -log s(c.o) - sum_k log s(-c.n_k) for a fixed negative set.
double sgns_loss(const EmbeddingModel& model, Index center, Index context,
                 std::span<const Index> negatives);

// One SGD step on the pair plus the given negatives; returns the loss at the
// parameters before the update.
double sgns_update(EmbeddingModel& model, Index center, Index context,
                   std::span<const Index> negatives, double learning_rate);

// Draws cfg.negatives noise indices (resampling collisions with the positive
// context away by skipping them) and applies one update.
double sgns_step(EmbeddingModel& model, Index center, Index context, const NegativeSampler& sampler,
                 const SgnsConfig& cfg, Rng& rng);

// Per-epoch training curve: mean pair loss for the samplers, total cost for
// GloVe.
struct TrainStats {
    std::vector<double> epoch_loss;

    double final_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.back(); }
};

// Center table initialized uniformly in [-0.5/dim, 0.5/dim], context at zero;
// learning rate decays linearly to a floor of 1e-4 of the initial value.
// workers > 1 trains lock-free over shared tables (order of updates is then
// nondeterministic); a single worker is the bit-reproducible reference.
EmbeddingModel train_sgns(const IndexedCorpus& corpus, std::size_t vocab_size,
                          const SgnsConfig& cfg, TrainStats* stats = nullptr);

}  // namespace entity_embed
