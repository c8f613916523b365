#include "entity_embed/graph_embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entity_embed {

namespace {

inline double norm_weight(double w, WeightNorm norm) {
    return norm == WeightNorm::ID ? w : std::log1p(w);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// cumulative transition weights per node, built once per (graph, norm)
struct TransitionTable {
    std::vector<std::vector<double>> cumulative;

    TransitionTable(const CoocGraph& g, WeightNorm norm) : cumulative(g.num_nodes()) {
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            const auto nbrs = g.neighbors(static_cast<Index>(i));
            auto& cum = cumulative[i];
            cum.resize(nbrs.size());
            double running = 0.0;
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                running += norm_weight(nbrs[k].second, norm);
                cum[k] = running;
            }
        }
    }

    Index step(const CoocGraph& g, Index node, Rng& rng) const {
        const auto& cum = cumulative[static_cast<std::size_t>(node)];
        const double u = rng.next_double() * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        if (it == cum.end()) --it;
        return g.neighbors(node)[static_cast<std::size_t>(it - cum.begin())].first;
    }
};

std::vector<Index> walk_from(const CoocGraph& g, const TransitionTable& table, Index start,
                             int length, Rng& rng) {
    std::vector<Index> walk;
    walk.reserve(static_cast<std::size_t>(length));
    walk.push_back(start);
    Index current = start;
    for (int s = 1; s < length; ++s) {
        if (g.degree(current) == 0) break;  // unreachable on undirected positive-weight graphs
        current = table.step(g, current, rng);
        walk.push_back(current);
    }
    return walk;
}

}  // namespace

std::vector<double> transition_distribution(const CoocGraph& g, Index node, WeightNorm norm) {
    const auto nbrs = g.neighbors(node);
    if (nbrs.empty()) throw std::runtime_error("transition distribution of an isolated node");
    std::vector<double> probs(nbrs.size());
    double total = 0.0;
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
        probs[k] = norm_weight(nbrs[k].second, norm);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::vector<Index> random_walk(const CoocGraph& g, Index start, const WalkConfig& cfg, Rng& rng) {
    if (cfg.walk_length < 2) throw std::invalid_argument("walk length must be >= 2");
    if (g.degree(start) == 0) throw std::runtime_error("random walk from an isolated node");
    const TransitionTable table(g, cfg.weight_norm);
    return walk_from(g, table, start, cfg.walk_length, rng);
}

IndexedCorpus generate_walk_corpus(const CoocGraph& g, const WalkConfig& cfg) {
    if (cfg.walk_length < 2 || cfg.walks_per_node < 1)
        throw std::invalid_argument("invalid walk configuration");
    const TransitionTable table(g, cfg.weight_norm);
    const auto starts = g.non_isolated_nodes();

    IndexedDocument walks;
    walks.id = "walks";
    walks.sentences.resize(starts.size() * static_cast<std::size_t>(cfg.walks_per_node));

    // one pass per walk round; node visit order reshuffled per pass, each walk
    // on its own substream so any worker count produces the same corpus
    const int workers = std::max(1, cfg.workers);
    for (int pass = 0; pass < cfg.walks_per_node; ++pass) {
        std::vector<Index> order = starts;
        Rng pass_rng(Rng::derive(cfg.seed, 0x0a11, static_cast<std::uint64_t>(pass)));
        pass_rng.shuffle(order);
        const std::size_t base = static_cast<std::size_t>(pass) * starts.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
#endif
        for (std::size_t n = 0; n < order.size(); ++n) {
            Rng walk_rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(order[n]),
                                     0x3000ULL + static_cast<std::uint64_t>(pass)));
            walks.sentences[base + n] = walk_from(g, table, order[n], cfg.walk_length, walk_rng);
        }
    }
#ifndef _OPENMP
    (void)workers;
#endif
    IndexedCorpus corpus;
    corpus.push_back(std::move(walks));
    return corpus;
}

EmbeddingModel deepwalk_train(const CoocGraph& g, const WalkConfig& wcfg, SgnsConfig scfg,
                              TrainStats* stats) {
    if (g.non_isolated_nodes().empty()) throw std::runtime_error("deepwalk: empty graph");
    const IndexedCorpus walks = generate_walk_corpus(g, wcfg);
    scfg.window = wcfg.walk_length;  // the whole walk is context
    return train_sgns(walks, g.num_nodes(), scfg, stats);
}

std::vector<double> verse_similarity_row(const CoocGraph& g, Index node) {
    const std::size_t deg = g.degree(node);
    if (deg == 0) throw std::runtime_error("similarity row of an isolated node");
    return std::vector<double>(deg, 1.0 / static_cast<double>(deg));
}

double verse_round_loss(const EmbeddingModel& model, Index u, Index v,
                        std::span<const Index> negatives) {
    const auto cu = model.center_row(static_cast<std::size_t>(u));
    double loss = -std::log(sigmoid(dot(cu, model.center_row(static_cast<std::size_t>(v)))));
    for (Index n : negatives)
        loss -= std::log(sigmoid(-dot(cu, model.center_row(static_cast<std::size_t>(n)))));
    return loss;
}

double verse_round_update(EmbeddingModel& model, Index u, Index v,
                          std::span<const Index> negatives, double learning_rate) {
    const int dim = model.dim;
    auto cu = model.center_row(static_cast<std::size_t>(u));
    thread_local std::vector<double> u_grad;
    u_grad.assign(static_cast<std::size_t>(dim), 0.0);
    double loss = 0.0;

    auto push = [&](Index other, double label) {
        auto co = model.center_row(static_cast<std::size_t>(other));
        const double z = dot(cu, co);
        const double s = sigmoid(z);
        loss -= label > 0.5 ? std::log(s) : std::log(sigmoid(-z));
        const double g = s - label;
        for (int k = 0; k < dim; ++k) {
            u_grad[static_cast<std::size_t>(k)] += g * co[static_cast<std::size_t>(k)];
            co[static_cast<std::size_t>(k)] -= learning_rate * g * cu[static_cast<std::size_t>(k)];
        }
    };

    push(v, 1.0);
    for (Index n : negatives) push(n, 0.0);
    for (int k = 0; k < dim; ++k)
        cu[static_cast<std::size_t>(k)] -= learning_rate * u_grad[static_cast<std::size_t>(k)];
    return loss;
}

EmbeddingModel verse_train(const CoocGraph& g, const VerseConfig& cfg, TrainStats* stats) {
    const auto starts = g.non_isolated_nodes();
    if (starts.empty()) throw std::runtime_error("verse: empty graph");
    if (cfg.negatives < 1 || cfg.samples < 1) throw std::invalid_argument("verse: invalid configuration");

    EmbeddingModel model = EmbeddingModel::make(g.num_nodes(), cfg.dim, false, false);
    {
        Rng init(cfg.seed);
        const double half = 0.5 / cfg.dim;
        for (double& v : model.center) v = init.uniform(-half, half);
    }

    const std::uint64_t total_rounds = cfg.samples * static_cast<std::uint64_t>(g.num_nodes());
    const std::uint64_t slice = std::max<std::uint64_t>(1, total_rounds / 20);
    const auto num_nodes = static_cast<std::uint64_t>(g.num_nodes());

    // positives follow the adjacency similarity row (uniform over neighbors)
    // unless the weighted variant is requested
    std::optional<TransitionTable> weighted;
    if (cfg.weighted_positives) weighted.emplace(g, WeightNorm::ID);

    // divergence is flagged, not thrown: exceptions must not cross the OpenMP
    // region boundary
    std::atomic<bool> diverged{false};

    auto run_round = [&](Rng& rng, std::vector<Index>& negatives) {
        const Index u = starts[rng.bounded(starts.size())];
        const auto nbrs = g.neighbors(u);
        const Index v = weighted ? weighted->step(g, u, rng)
                                 : nbrs[rng.bounded(nbrs.size())].first;
        negatives.clear();
        for (int k = 0; k < cfg.negatives; ++k)
            negatives.push_back(static_cast<Index>(rng.bounded(num_nodes)));
        const double loss = verse_round_update(model, u, v, negatives, cfg.learning_rate);
        if (!std::isfinite(loss)) diverged.store(true, std::memory_order_relaxed);
        return loss;
    };

    if (stats) stats->epoch_loss.clear();
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        Rng rng(Rng::derive(cfg.seed, 0x7e25e));
        std::vector<Index> negatives;
        double slice_sum = 0.0;
        std::uint64_t in_slice = 0;
        for (std::uint64_t r = 0; r < total_rounds; ++r) {
            slice_sum += run_round(rng, negatives);
            if (++in_slice == slice || r + 1 == total_rounds) {
                if (stats) stats->epoch_loss.push_back(slice_sum / static_cast<double>(in_slice));
                slice_sum = 0.0;
                in_slice = 0;
            }
        }
    } else {
#ifdef _OPENMP
        double total_loss = 0.0;
#pragma omp parallel reduction(+ : total_loss) num_threads(workers)
        {
            const int tid = omp_get_thread_num();
            Rng rng(Rng::derive(cfg.seed, 0x7e25e, static_cast<std::uint64_t>(tid)));
            std::vector<Index> negatives;
#pragma omp for schedule(static)
            for (std::uint64_t r = 0; r < total_rounds; ++r) total_loss += run_round(rng, negatives);
        }
        if (stats) stats->epoch_loss.push_back(total_loss / static_cast<double>(total_rounds));
#else
        Rng rng(Rng::derive(cfg.seed, 0x7e25e));
        std::vector<Index> negatives;
        double total_loss = 0.0;
        for (std::uint64_t r = 0; r < total_rounds; ++r) total_loss += run_round(rng, negatives);
        if (stats) stats->epoch_loss.push_back(total_loss / static_cast<double>(total_rounds));
#endif
    }

    if (diverged.load())
        throw std::runtime_error("verse: non-finite loss, learning rate too high");
    if (!model.all_finite()) throw std::runtime_error("verse: non-finite parameters after training");
    return model;
}

}  // namespace entity_embed
