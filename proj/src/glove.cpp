#include "entity_embed/glove.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entity_embed/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entity_embed {

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double residual(const EmbeddingModel& m, Index i, Index j, double x_ij) {
    return dot(m.center_row(static_cast<std::size_t>(i)),
               m.context_row(static_cast<std::size_t>(j))) +
           m.center_bias[static_cast<std::size_t>(i)] +
           m.context_bias[static_cast<std::size_t>(j)] - std::log(x_ij);
}

}  // namespace

double glove_weight(double x, const GloveConfig& cfg) {
    if (x < 0.0) throw std::invalid_argument("glove weight needs x >= 0");
    return x < cfg.x_max ? std::pow(x / cfg.x_max, cfg.alpha) : 1.0;
}

double glove_cost_term(const EmbeddingModel& model, Index i, Index j, double x_ij,
                       const GloveConfig& cfg) {
    if (x_ij <= 0.0) throw std::invalid_argument("glove cost needs X_ij > 0");
    const double diff = residual(model, i, j, x_ij);
    return glove_weight(x_ij, cfg) * diff * diff;
}

double glove_cost_gradients(const EmbeddingModel& model, Index i, Index j, double x_ij,
                            const GloveConfig& cfg, std::span<double> grad_center,
                            std::span<double> grad_context, double& grad_bias_i,
                            double& grad_bias_j) {
    if (x_ij <= 0.0) throw std::invalid_argument("glove cost needs X_ij > 0");
    const double f = glove_weight(x_ij, cfg);
    const double diff = residual(model, i, j, x_ij);
    const double scale = 2.0 * f * diff;
    const auto ci = model.center_row(static_cast<std::size_t>(i));
    const auto cj = model.context_row(static_cast<std::size_t>(j));
    for (int k = 0; k < model.dim; ++k) {
        grad_center[static_cast<std::size_t>(k)] = scale * cj[static_cast<std::size_t>(k)];
        grad_context[static_cast<std::size_t>(k)] = scale * ci[static_cast<std::size_t>(k)];
    }
    grad_bias_i = scale;
    grad_bias_j = scale;
    return f * diff * diff;
}

double glove_total_cost(const EmbeddingModel& model, const CoocMatrix& x, const GloveConfig& cfg) {
    double total = 0.0;
    for (const auto& [i, j, w] : x.sorted_cells())
        total += glove_cost_term(model, i, j, w, cfg) + glove_cost_term(model, j, i, w, cfg);
    return total;
}

EmbeddingModel train_glove(const CoocMatrix& x, std::size_t vocab_size, const GloveConfig& cfg,
                           TrainStats* stats) {
    if (x.pair_count() == 0) throw std::runtime_error("glove: empty cooccurrence matrix");
    if (cfg.alpha <= 0.0 || cfg.alpha > 1.0 || cfg.x_max <= 0.0)
        throw std::invalid_argument("glove: invalid weighting configuration");

    EmbeddingModel model = EmbeddingModel::make(vocab_size, cfg.dim, true, true);
    {
        Rng init(cfg.seed);
        const double half = 0.5 / cfg.dim;
        for (double& v : model.center) v = init.uniform(-half, half);
        for (double& v : model.context) v = init.uniform(-half, half);
        for (double& v : model.center_bias) v = init.uniform(-half, half);
        for (double& v : model.context_bias) v = init.uniform(-half, half);
    }

    // both directions of every stored pair, like the reference shuffled
    // cooccurrence records
    struct Record {
        Index i, j;
        double x, log_x, f;
    };
    std::vector<Record> records;
    records.reserve(2 * x.pair_count());
    for (const auto& [i, j, w] : x.sorted_cells()) {
        const double f = glove_weight(w, cfg);
        const double lw = std::log(w);
        records.push_back({i, j, w, lw, f});
        records.push_back({j, i, w, lw, f});
    }

    // AdaGrad accumulators, initialized at 1 like the reference
    const auto tbl = vocab_size * static_cast<std::size_t>(cfg.dim);
    std::vector<double> gsq_center(tbl, 1.0), gsq_context(tbl, 1.0);
    std::vector<double> gsq_bias_c(vocab_size, 1.0), gsq_bias_t(vocab_size, 1.0);

    const int dim = cfg.dim;
    const double eta = cfg.learning_rate;

    auto apply = [&](const Record& r, double& cost_out) {
        const auto row_i = static_cast<std::size_t>(r.i) * static_cast<std::size_t>(dim);
        const auto row_j = static_cast<std::size_t>(r.j) * static_cast<std::size_t>(dim);
        double* wi = model.center.data() + row_i;
        double* wj = model.context.data() + row_j;
        double z = 0.0;
        for (int k = 0; k < dim; ++k) z += wi[k] * wj[k];
        const double diff =
            z + model.center_bias[static_cast<std::size_t>(r.i)] +
            model.context_bias[static_cast<std::size_t>(r.j)] - r.log_x;
        cost_out = r.f * diff * diff;
        const double fdiff = eta * r.f * diff;
        double* gi = gsq_center.data() + row_i;
        double* gj = gsq_context.data() + row_j;
        for (int k = 0; k < dim; ++k) {
            const double ti = fdiff * wj[k];
            const double tj = fdiff * wi[k];
            wi[k] -= ti / std::sqrt(gi[k]);
            wj[k] -= tj / std::sqrt(gj[k]);
            gi[k] += ti * ti;
            gj[k] += tj * tj;
        }
        model.center_bias[static_cast<std::size_t>(r.i)] -=
            fdiff / std::sqrt(gsq_bias_c[static_cast<std::size_t>(r.i)]);
        model.context_bias[static_cast<std::size_t>(r.j)] -=
            fdiff / std::sqrt(gsq_bias_t[static_cast<std::size_t>(r.j)]);
        gsq_bias_c[static_cast<std::size_t>(r.i)] += fdiff * fdiff;
        gsq_bias_t[static_cast<std::size_t>(r.j)] += fdiff * fdiff;
    };

    const int workers = std::max(1, cfg.workers);
    if (stats) stats->epoch_loss.clear();
    Rng shuffle_rng(Rng::derive(cfg.seed, 0x5107));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(records);
        double cost_sum = 0.0;
        if (workers == 1) {
            for (const auto& r : records) {
                double c;
                apply(r, c);
                if (!std::isfinite(c))
                    throw std::runtime_error("glove: non-finite cost, learning rate too high");
                cost_sum += c;
            }
        } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : cost_sum) num_threads(workers)
            for (std::size_t n = 0; n < records.size(); ++n) {
                double c;
                apply(records[n], c);
                cost_sum += c;
            }
            if (!std::isfinite(cost_sum))
                throw std::runtime_error("glove: non-finite cost, learning rate too high");
#else
            for (const auto& r : records) {
                double c;
                apply(r, c);
                cost_sum += c;
            }
#endif
        }
        if (stats)
            stats->epoch_loss.push_back(cost_sum);
    }

    if (!model.all_finite())
        throw std::runtime_error("glove: non-finite parameters after training");
    return model;
}

}  // namespace entity_embed
