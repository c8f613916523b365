#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "entity_embed/types.hpp"
#include "entity_embed/vocab.hpp"

namespace entity_embed {

// Symmetric sparse cooccurrence matrix with zero diagonal. Each unordered
// pair is stored once under the canonical (min, max) key.
class CoocMatrix {
public:
    static std::uint64_t pack(Index i, Index j);

    void add(Index i, Index j, double w);
    double at(Index i, Index j) const;
    std::size_t pair_count() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    const std::unordered_map<std::uint64_t, double>& cells() const { return cells_; }

    // Canonical cells sorted by (i, j); the deterministic iteration order
    // used for file output and epoch shuffles.
    std::vector<std::tuple<Index, Index, double>> sorted_cells() const;

    bool operator==(const CoocMatrix& other) const { return cells_ == other.cells_; }

private:
    std::unordered_map<std::uint64_t, double> cells_;
};

// Undirected weighted graph over vocabulary indices, adjacency sorted by
// neighbor. Isolated indices keep empty adjacency lists.
class CoocGraph {
public:
    CoocGraph() = default;
    explicit CoocGraph(std::size_t num_nodes) : adj_(num_nodes) {}

    static CoocGraph from_matrix(std::size_t num_nodes, const CoocMatrix& weights);

    std::size_t num_nodes() const { return adj_.size(); }
    std::size_t degree(Index i) const { return adj_[static_cast<std::size_t>(i)].size(); }
    std::span<const std::pair<Index, double>> neighbors(Index i) const {
        return adj_[static_cast<std::size_t>(i)];
    }
    double weight(Index i, Index j) const;  // 0 when no edge
    std::size_t num_edges() const;          // each undirected edge counted once

    std::vector<Index> non_isolated_nodes() const;

    bool operator==(const CoocGraph& other) const { return adj_ == other.adj_; }

private:
    std::vector<std::vector<std::pair<Index, double>>> adj_;
};

struct GraphBuildConfig {
    enum class Decay { INV_DIST, EXP };

    int entity_window = 5;  // sentences; entity pairs contribute for 0 <= d < entity_window
    Decay decay = Decay::INV_DIST;
    double edge_floor = 0.0;  // prune edges with accumulated weight below this

    // decay(0) = 1; non-increasing and positive on the window
    double decay_weight(int d) const;
};

// Distance-resolved pair counts: one integer count map per distance. Weights
// are applied once at finalize time, in ascending distance order, so merging
// shard accumulators gives bit-identical results to a single pass no matter
// how documents were split across workers.
class PairCountsByDistance {
public:
    explicit PairCountsByDistance(int max_distance) : counts_(static_cast<std::size_t>(max_distance) + 1) {}

    void add(Index i, Index j, int d);
    void merge(const PairCountsByDistance& other);

    int max_distance() const { return static_cast<int>(counts_.size()) - 1; }

    // weight_of(d) maps a distance to its per-cooccurrence contribution.
    CoocMatrix finalize(const std::function<double(int)>& weight_of) const;

private:
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> counts_;
};

// Windowed GloVe counts: each in-sentence pair within `window` tokens adds
// 1/d for token distance d, symmetrized by construction.
CoocMatrix accumulate_glove_counts(const IndexedCorpus& corpus, int window, int workers = 1);
CoocMatrix accumulate_glove_counts(std::span<const Document> docs, const Vocabulary& vocab,
                                   int window, int workers = 1);

// Term and term-entity pairs contribute only within a sentence; entity-entity
// pairs contribute decay(d) for sentence distances 0 <= d < entity_window.
CoocGraph build_graph(const IndexedCorpus& corpus, std::span<const char> is_entity,
                      const GraphBuildConfig& cfg, int workers = 1);
CoocGraph build_graph(std::span<const Document> docs, const Vocabulary& vocab,
                      const GraphBuildConfig& cfg, int workers = 1);

struct GraphStats {
    std::size_t nodes = 0;  // non-isolated
    std::size_t edges = 0;  // undirected, counted once
    double weight_min = 0, weight_q25 = 0, weight_median = 0, weight_q75 = 0, weight_max = 0;
};

GraphStats graph_stats(const CoocGraph& g);

}  // namespace entity_embed
