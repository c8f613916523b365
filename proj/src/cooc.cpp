#include "entity_embed/cooc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entity_embed {

std::uint64_t CoocMatrix::pack(Index i, Index j) {
    auto lo = static_cast<std::uint64_t>(std::min(i, j));
    auto hi = static_cast<std::uint64_t>(std::max(i, j));
    return (lo << 32) | hi;
}

void CoocMatrix::add(Index i, Index j, double w) {
    if (i == j) throw std::invalid_argument("cooccurrence self-pair");
    cells_[pack(i, j)] += w;
}

double CoocMatrix::at(Index i, Index j) const {
    auto it = cells_.find(pack(i, j));
    return it == cells_.end() ? 0.0 : it->second;
}

std::vector<std::tuple<Index, Index, double>> CoocMatrix::sorted_cells() const {
    std::vector<std::tuple<Index, Index, double>> out;
    out.reserve(cells_.size());
    for (const auto& [key, w] : cells_)
        out.emplace_back(static_cast<Index>(key >> 32), static_cast<Index>(key & 0xffffffffULL), w);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b)
                                                : std::get<1>(a) < std::get<1>(b);
    });
    return out;
}

CoocGraph CoocGraph::from_matrix(std::size_t num_nodes, const CoocMatrix& weights) {
    CoocGraph g(num_nodes);
    for (const auto& [i, j, w] : weights.sorted_cells()) {
        g.adj_[static_cast<std::size_t>(i)].emplace_back(j, w);
        g.adj_[static_cast<std::size_t>(j)].emplace_back(i, w);
    }
    for (auto& nbrs : g.adj_)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    return g;
}

double CoocGraph::weight(Index i, Index j) const {
    const auto& nbrs = adj_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                               [](const auto& p, Index v) { return p.first < v; });
    return it != nbrs.end() && it->first == j ? it->second : 0.0;
}

std::size_t CoocGraph::num_edges() const {
    std::size_t twice = 0;
    for (const auto& nbrs : adj_) twice += nbrs.size();
    return twice / 2;
}

std::vector<Index> CoocGraph::non_isolated_nodes() const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < adj_.size(); ++i)
        if (!adj_[i].empty()) out.push_back(static_cast<Index>(i));
    return out;
}

double GraphBuildConfig::decay_weight(int d) const {
    switch (decay) {
        case Decay::INV_DIST: return 1.0 / (1.0 + d);
        case Decay::EXP: return std::exp(-static_cast<double>(d));
    }
    return 0.0;
}

void PairCountsByDistance::add(Index i, Index j, int d) {
    if (i == j) return;
    ++counts_[static_cast<std::size_t>(d)][CoocMatrix::pack(i, j)];
}

void PairCountsByDistance::merge(const PairCountsByDistance& other) {
    if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size());
    for (std::size_t d = 0; d < other.counts_.size(); ++d)
        for (const auto& [key, c] : other.counts_[d]) counts_[d][key] += c;
}

CoocMatrix PairCountsByDistance::finalize(const std::function<double(int)>& weight_of) const {
    // ascending-distance accumulation per cell fixes the summation order
    CoocMatrix out;
    std::unordered_map<std::uint64_t, double> acc;
    for (std::size_t d = 0; d < counts_.size(); ++d) {
        const double w = weight_of(static_cast<int>(d));
        for (const auto& [key, c] : counts_[d]) acc[key] += static_cast<double>(c) * w;
    }
    for (const auto& [key, w] : acc)
        out.add(static_cast<Index>(key >> 32), static_cast<Index>(key & 0xffffffffULL), w);
    return out;
}

namespace {

void count_glove_document(const IndexedDocument& doc, int window, PairCountsByDistance& counts) {
    for (const auto& sent : doc.sentences) {
        const int n = static_cast<int>(sent.size());
        for (int i = 0; i < n; ++i) {
            const int hi = std::min(n - 1, i + window);
            for (int j = i + 1; j <= hi; ++j)
                counts.add(sent[static_cast<std::size_t>(i)], sent[static_cast<std::size_t>(j)],
                           j - i);
        }
    }
}

void count_graph_document(const IndexedDocument& doc, std::span<const char> is_entity,
                          const GraphBuildConfig& cfg, PairCountsByDistance& counts) {
    const int num_sents = static_cast<int>(doc.sentences.size());

    // d = 0: all unordered mention pairs inside one sentence
    for (const auto& sent : doc.sentences) {
        const int n = static_cast<int>(sent.size());
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                counts.add(sent[static_cast<std::size_t>(a)], sent[static_cast<std::size_t>(b)], 0);
    }

    // d >= 1: entity mentions across sentences within the window
    std::vector<std::vector<Index>> entity_mentions(static_cast<std::size_t>(num_sents));
    for (int s = 0; s < num_sents; ++s)
        for (Index id : doc.sentences[static_cast<std::size_t>(s)])
            if (is_entity[static_cast<std::size_t>(id)])
                entity_mentions[static_cast<std::size_t>(s)].push_back(id);

    for (int s = 0; s < num_sents; ++s) {
        const auto& here = entity_mentions[static_cast<std::size_t>(s)];
        if (here.empty()) continue;
        const int last = std::min(num_sents - 1, s + cfg.entity_window - 1);
        for (int t = s + 1; t <= last; ++t) {
            const auto& there = entity_mentions[static_cast<std::size_t>(t)];
            for (Index a : here)
                for (Index b : there) counts.add(a, b, t - s);
        }
    }
}

template <typename CountDoc>
PairCountsByDistance accumulate_sharded(const IndexedCorpus& corpus, int max_distance, int workers,
                                        CountDoc&& count_doc) {
    int shards = 1;
#ifdef _OPENMP
    shards = std::max(1, workers);
#else
    (void)workers;
#endif
    std::vector<PairCountsByDistance> partial(static_cast<std::size_t>(shards),
                                              PairCountsByDistance(max_distance));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(shards)
#endif
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        int shard = 0;
#ifdef _OPENMP
        shard = omp_get_thread_num();
#endif
        count_doc(corpus[d], partial[static_cast<std::size_t>(shard)]);
    }
    PairCountsByDistance merged = std::move(partial[0]);
    for (std::size_t s = 1; s < partial.size(); ++s) merged.merge(partial[s]);
    return merged;
}

}  // namespace

CoocMatrix accumulate_glove_counts(const IndexedCorpus& corpus, int window, int workers) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    auto counts = accumulate_sharded(
        corpus, window, workers,
        [&](const IndexedDocument& doc, PairCountsByDistance& c) {
            count_glove_document(doc, window, c);
        });
    return counts.finalize([](int d) { return d == 0 ? 0.0 : 1.0 / d; });
}

CoocMatrix accumulate_glove_counts(std::span<const Document> docs, const Vocabulary& vocab,
                                   int window, int workers) {
    return accumulate_glove_counts(vocab.index_corpus(docs), window, workers);
}

CoocGraph build_graph(const IndexedCorpus& corpus, std::span<const char> is_entity,
                      const GraphBuildConfig& cfg, int workers) {
    if (cfg.entity_window < 1) throw std::invalid_argument("entity_window must be >= 1");
    auto counts = accumulate_sharded(
        corpus, cfg.entity_window - 1, workers,
        [&](const IndexedDocument& doc, PairCountsByDistance& c) {
            count_graph_document(doc, is_entity, cfg, c);
        });
    CoocMatrix weights = counts.finalize([&](int d) { return cfg.decay_weight(d); });
    if (cfg.edge_floor > 0.0) {
        CoocMatrix kept;
        for (const auto& [i, j, w] : weights.sorted_cells())
            if (w >= cfg.edge_floor) kept.add(i, j, w);
        weights = std::move(kept);
    }
    return CoocGraph::from_matrix(is_entity.size(), weights);
}

CoocGraph build_graph(std::span<const Document> docs, const Vocabulary& vocab,
                      const GraphBuildConfig& cfg, int workers) {
    std::vector<char> is_entity(vocab.size(), 0);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        is_entity[i] = vocab.entry(static_cast<Index>(i)).kind == Kind::ENTITY ? 1 : 0;
    return build_graph(vocab.index_corpus(docs), is_entity, cfg, workers);
}

GraphStats graph_stats(const CoocGraph& g) {
    GraphStats st;
    std::vector<double> weights;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const auto nbrs = g.neighbors(static_cast<Index>(i));
        if (nbrs.empty()) continue;
        ++st.nodes;
        for (const auto& [j, w] : nbrs)
            if (static_cast<std::size_t>(j) > i) weights.push_back(w);
    }
    st.edges = weights.size();
    if (weights.empty()) return st;
    std::sort(weights.begin(), weights.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(weights.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, weights.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return weights[lo] * (1.0 - frac) + weights[hi] * frac;
    };
    st.weight_min = weights.front();
    st.weight_q25 = quantile(0.25);
    st.weight_median = quantile(0.5);
    st.weight_q75 = quantile(0.75);
    st.weight_max = weights.back();
    return st;
}

}  // namespace entity_embed
