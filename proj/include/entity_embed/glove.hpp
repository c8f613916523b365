#pragma once

#include <cstdint>
#include <span>

#include "entity_embed/cooc.hpp"
#include "entity_embed/model.hpp"
#include "entity_embed/sgns.hpp"

namespace entity_embed {

struct GloveConfig {
    int dim = 100;
    double x_max = 1000.0;
    double alpha = 0.5;
    double learning_rate = 0.06;
    int epochs = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    PublishMode publish = PublishMode::SUM;
};

// f(x) = (x/x_max)^alpha below the cut-off, 1 from x_max on.
double glove_weight(double x, const GloveConfig& cfg);

// f(X_ij) * (center_i . context_j + b_i + b~_j - log X_ij)^2; throws for
// X_ij <= 0.
double glove_cost_term(const EmbeddingModel& model, Index i, Index j, double x_ij,
                       const GloveConfig& cfg);

// Analytic gradients of glove_cost_term with respect to every touched
// parameter; returns the cost. grad_center/grad_context must hold dim values.
double glove_cost_gradients(const EmbeddingModel& model, Index i, Index j, double x_ij,
                            const GloveConfig& cfg, std::span<double> grad_center,
                            std::span<double> grad_context, double& grad_bias_i,
                            double& grad_bias_j);

// Total cost over both directions of every stored pair, accumulated in
// canonical cell order (swap-invariant by construction).
double glove_total_cost(const EmbeddingModel& model, const CoocMatrix& x, const GloveConfig& cfg);

// AdaGrad over shuffled nonzero entries (each stored pair visited in both
// directions per epoch). Single worker with a fixed seed is bit-reproducible;
// more workers share the tables lock-free.
EmbeddingModel train_glove(const CoocMatrix& x, std::size_t vocab_size, const GloveConfig& cfg,
                           TrainStats* stats = nullptr);

}  // namespace entity_embed
