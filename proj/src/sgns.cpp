#include "entity_embed/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entity_embed {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

struct FlatSentences {
    std::vector<std::span<const Index>> sentences;
    std::uint64_t total_tokens = 0;
};

FlatSentences flatten(const IndexedCorpus& corpus) {
    FlatSentences out;
    for (const auto& doc : corpus)
        for (const auto& sent : doc.sentences) {
            if (sent.empty()) continue;
            out.sentences.emplace_back(sent.data(), sent.size());
            out.total_tokens += sent.size();
        }
    return out;
}

std::vector<std::uint64_t> count_tokens(const IndexedCorpus& corpus, std::size_t vocab_size) {
    std::vector<std::uint64_t> counts(vocab_size, 0);
    for (const auto& doc : corpus)
        for (const auto& sent : doc.sentences)
            for (Index id : sent) ++counts[static_cast<std::size_t>(id)];
    return counts;
}

// keep probability from the reference subsampling formula
inline bool keep_token(Index id, double threshold, std::span<const double> freq_fraction,
                       Rng& rng) {
    if (threshold <= 0.0) return true;
    const double f = freq_fraction[static_cast<std::size_t>(id)];
    if (f <= threshold) return true;
    const double keep = (std::sqrt(f / threshold) + 1.0) * threshold / f;
    return rng.next_double() < keep;
}

struct EpochAccumulator {
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
};

}  // namespace

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
    if (counts.empty()) throw std::invalid_argument("negative sampler needs a non-empty vocabulary");
    cumulative_.resize(counts.size());
    double running = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        running += std::pow(static_cast<double>(counts[i]), power);
        cumulative_[i] = running;
    }
    if (running <= 0.0) throw std::invalid_argument("negative sampler needs positive mass");
}

Index NegativeSampler::sample(Rng& rng) const {
    const double u = rng.next_double() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<Index>(it - cumulative_.begin());
}

double NegativeSampler::probability(Index i) const {
    const auto idx = static_cast<std::size_t>(i);
    const double prev = idx == 0 ? 0.0 : cumulative_[idx - 1];
    return (cumulative_[idx] - prev) / cumulative_.back();
}

std::vector<std::pair<Index, Index>> generate_pairs(std::span<const Index> sentence, int window,
                                                    Rng& rng, bool dynamic) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    std::vector<std::pair<Index, Index>> pairs;
    for_each_context_pair(sentence, window, rng, dynamic,
                          [&](Index c, Index o) { pairs.emplace_back(c, o); });
    return pairs;
}

double sgns_loss(const EmbeddingModel& model, Index center, Index context,
                 std::span<const Index> negatives) {
    const auto c = model.center_row(static_cast<std::size_t>(center));
    double loss = -std::log(sigmoid(dot(c, model.context_row(static_cast<std::size_t>(context)))));
    for (Index n : negatives)
        loss -= std::log(sigmoid(-dot(c, model.context_row(static_cast<std::size_t>(n)))));
    return loss;
}

double sgns_update(EmbeddingModel& model, Index center, Index context,
                   std::span<const Index> negatives, double learning_rate) {
    const int dim = model.dim;
    auto c = model.center_row(static_cast<std::size_t>(center));
    double loss = 0.0;
    // accumulate the center gradient while updating context rows in place
    thread_local std::vector<double> center_grad;
    center_grad.assign(static_cast<std::size_t>(dim), 0.0);

    auto push = [&](Index row, double label) {
        auto ctx = model.context_row(static_cast<std::size_t>(row));
        const double z = dot(c, ctx);
        const double s = sigmoid(z);
        // same expression as sgns_loss so the returned loss is bit-identical
        loss -= label > 0.5 ? std::log(s) : std::log(sigmoid(-z));
        const double g = s - label;  // d loss / d z
        for (int k = 0; k < dim; ++k) {
            center_grad[static_cast<std::size_t>(k)] += g * ctx[static_cast<std::size_t>(k)];
            ctx[static_cast<std::size_t>(k)] -= learning_rate * g * c[static_cast<std::size_t>(k)];
        }
    };

    push(context, 1.0);
    for (Index n : negatives) push(n, 0.0);
    for (int k = 0; k < dim; ++k)
        c[static_cast<std::size_t>(k)] -= learning_rate * center_grad[static_cast<std::size_t>(k)];
    return loss;
}

namespace {

void draw_negatives(const NegativeSampler& sampler, Index positive, int count, Rng& rng,
                    std::vector<Index>& out) {
    out.clear();
    for (int k = 0; k < count; ++k) {
        const Index n = sampler.sample(rng);
        if (n == positive) continue;  // reference behavior: skip the positive
        out.push_back(n);
    }
}

}  // namespace

double sgns_step(EmbeddingModel& model, Index center, Index context, const NegativeSampler& sampler,
                 const SgnsConfig& cfg, Rng& rng) {
    thread_local std::vector<Index> negatives;
    draw_negatives(sampler, context, cfg.negatives, rng, negatives);
    const double loss = sgns_update(model, center, context, negatives, cfg.learning_rate);
    if (!std::isfinite(loss))
        throw std::runtime_error("sgns: non-finite loss, learning rate too high");
    return loss;
}

EmbeddingModel train_sgns(const IndexedCorpus& corpus, std::size_t vocab_size,
                          const SgnsConfig& cfg, TrainStats* stats) {
    const auto flat = flatten(corpus);
    if (flat.total_tokens == 0) throw std::runtime_error("sgns: empty corpus");
    if (cfg.window < 1 || cfg.negatives < 1 || cfg.learning_rate <= 0.0)
        throw std::invalid_argument("sgns: invalid configuration");

    EmbeddingModel model = EmbeddingModel::make(vocab_size, cfg.dim, true, false);
    {
        Rng init(cfg.seed);
        const double half = 0.5 / cfg.dim;
        for (double& v : model.center) v = init.uniform(-half, half);
    }

    const auto counts = count_tokens(corpus, vocab_size);
    const NegativeSampler sampler(counts, cfg.unigram_power);

    std::vector<double> freq_fraction(vocab_size, 0.0);
    for (std::size_t i = 0; i < vocab_size; ++i)
        freq_fraction[i] =
            static_cast<double>(counts[i]) / static_cast<double>(flat.total_tokens);

    const double lr0 = cfg.learning_rate;
    const double lr_floor = lr0 * 1e-4;
    const auto total_work =
        static_cast<double>(flat.total_tokens) * static_cast<double>(cfg.epochs);
    std::atomic<std::uint64_t> processed{0};
    // divergence is flagged, not thrown: exceptions must not cross the
    // OpenMP region boundary
    std::atomic<bool> diverged{false};

    auto run_sentence = [&](std::span<const Index> sent, Rng& rng, EpochAccumulator& acc) {
        // lr decays with global token progress, floored
        const auto done = processed.fetch_add(sent.size(), std::memory_order_relaxed);
        double lr = lr0 * (1.0 - static_cast<double>(done) / total_work);
        if (lr < lr_floor) lr = lr_floor;

        std::vector<Index> kept;
        std::span<const Index> view = sent;
        if (cfg.subsample > 0.0) {
            kept.reserve(sent.size());
            for (Index id : sent)
                if (keep_token(id, cfg.subsample, freq_fraction, rng)) kept.push_back(id);
            view = kept;
        }
        thread_local std::vector<Index> negatives;
        for_each_context_pair(view, cfg.window, rng, true, [&](Index c, Index o) {
            draw_negatives(sampler, o, cfg.negatives, rng, negatives);
            const double loss = sgns_update(model, c, o, negatives, lr);
            if (!std::isfinite(loss)) diverged.store(true, std::memory_order_relaxed);
            acc.loss_sum += loss;
            ++acc.pairs;
        });
    };

    const int workers = std::max(1, cfg.workers);
    if (stats) stats->epoch_loss.clear();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        EpochAccumulator total;
        if (workers == 1) {
            Rng rng(Rng::derive(cfg.seed, 0x5e55, static_cast<std::uint64_t>(epoch)));
            for (const auto& sent : flat.sentences) run_sentence(sent, rng, total);
        } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
            {
                const int tid = omp_get_thread_num();
                Rng rng(Rng::derive(cfg.seed,
                                    0x1000ULL + static_cast<std::uint64_t>(tid),
                                    static_cast<std::uint64_t>(epoch)));
                EpochAccumulator local;
#pragma omp for schedule(static)
                for (std::size_t s = 0; s < flat.sentences.size(); ++s)
                    run_sentence(flat.sentences[s], rng, local);
#pragma omp critical
                {
                    total.loss_sum += local.loss_sum;
                    total.pairs += local.pairs;
                }
            }
#else
            Rng rng(Rng::derive(cfg.seed, 0x5e55, static_cast<std::uint64_t>(epoch)));
            for (const auto& sent : flat.sentences) run_sentence(sent, rng, total);
#endif
        }
        if (diverged.load())
            throw std::runtime_error("sgns: non-finite loss at epoch " + std::to_string(epoch) +
                                     ", learning rate too high");
        if (stats)
            stats->epoch_loss.push_back(
                total.pairs == 0 ? 0.0 : total.loss_sum / static_cast<double>(total.pairs));
    }

    if (!model.all_finite()) throw std::runtime_error("sgns: non-finite parameters after training");
    return model;
}

}  // namespace entity_embed
