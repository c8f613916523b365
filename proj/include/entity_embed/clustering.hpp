#pragma once

#include <cstdint>
#include <vector>

namespace entity_embed {

struct KMeansResult {
    std::vector<int> assignments;
    double inertia = 0;
};

// Mini-batch k-means (Sculley-style online centroid updates) with seeded
// restarts; returns the restart with the lowest full-data inertia.
KMeansResult minibatch_kmeans(const std::vector<double>& data, std::size_t n, int dim, int k,
                              std::uint64_t seed, int batch_size = 32, int max_iters = 100,
                              int restarts = 10);

// Ward-linkage agglomerative clustering on Euclidean distance, cut at k
// clusters. Deterministic: merge ties resolve to the lowest cluster ids.
std::vector<int> agglomerative_ward(const std::vector<double>& data, std::size_t n, int dim, int k);

}  // namespace entity_embed
