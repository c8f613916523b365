#include "entity_embed/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "entity_embed/rng.hpp"

namespace entity_embed {

namespace {

double sq_dist(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

int nearest_centroid(const double* point, const std::vector<double>& centroids, int k, int dim) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        const double d = sq_dist(point, centroids.data() + static_cast<std::size_t>(c) * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

KMeansResult one_kmeans_run(const std::vector<double>& data, std::size_t n, int dim, int k,
                            std::uint64_t seed, int batch_size, int max_iters) {
    Rng rng(seed);

    // seed centroids with k distinct data points
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
    for (int c = 0; c < k; ++c)
        std::copy_n(data.data() + order[static_cast<std::size_t>(c)] * dim, dim,
                    centroids.data() + static_cast<std::size_t>(c) * dim);

    // online per-centroid learning-rate updates over sampled mini-batches
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> batch(static_cast<std::size_t>(batch_size));
    for (int it = 0; it < max_iters; ++it) {
        for (auto& b : batch) b = rng.bounded(n);
        for (std::size_t b : batch) {
            const double* x = data.data() + b * dim;
            const int c = nearest_centroid(x, centroids, k, dim);
            const double lr = 1.0 / static_cast<double>(++counts[static_cast<std::size_t>(c)]);
            double* ctr = centroids.data() + static_cast<std::size_t>(c) * dim;
            for (int d = 0; d < dim; ++d) ctr[d] += lr * (x[d] - ctr[d]);
        }
    }

    KMeansResult result;
    result.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = data.data() + i * dim;
        const int c = nearest_centroid(x, centroids, k, dim);
        result.assignments[i] = c;
        result.inertia += sq_dist(x, centroids.data() + static_cast<std::size_t>(c) * dim, dim);
    }
    return result;
}

}  // namespace

KMeansResult minibatch_kmeans(const std::vector<double>& data, std::size_t n, int dim, int k,
                              std::uint64_t seed, int batch_size, int max_iters, int restarts) {
    if (k < 1 || n < static_cast<std::size_t>(k))
        throw std::invalid_argument("kmeans: need at least k points");
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto run = one_kmeans_run(data, n, dim, k, Rng::derive(seed, 0x43a5, static_cast<std::uint64_t>(r)),
                                  batch_size, max_iters);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

std::vector<int> agglomerative_ward(const std::vector<double>& data, std::size_t n, int dim,
                                    int k) {
    if (k < 1 || n < static_cast<std::size_t>(k))
        throw std::invalid_argument("agglomerative: need at least k points");

    // Lance-Williams updates on squared Euclidean distances
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sq_dist(data.data() + i * dim, data.data() + j * dim, dim);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }

    std::vector<std::size_t> sizes(n, 1);
    std::vector<char> active(n, 1);
    std::vector<int> membership(n);
    for (std::size_t i = 0; i < n; ++i) membership[i] = static_cast<int>(i);

    std::size_t clusters = n;
    while (clusters > static_cast<std::size_t>(k)) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (dist[i * n + j] < best) {
                    best = dist[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        // merge bj into bi
        const double nij = static_cast<double>(sizes[bi] + sizes[bj]);
        for (std::size_t m = 0; m < n; ++m) {
            if (!active[m] || m == bi || m == bj) continue;
            const double nm = static_cast<double>(sizes[m]);
            const double updated =
                ((static_cast<double>(sizes[bi]) + nm) * dist[bi * n + m] +
                 (static_cast<double>(sizes[bj]) + nm) * dist[bj * n + m] -
                 nm * dist[bi * n + bj]) /
                (nij + nm);
            dist[bi * n + m] = updated;
            dist[m * n + bi] = updated;
        }
        sizes[bi] += sizes[bj];
        active[bj] = 0;
        for (std::size_t m = 0; m < n; ++m)
            if (membership[m] == static_cast<int>(bj)) membership[m] = static_cast<int>(bi);
        --clusters;
    }

    // compact labels in first-appearance order
    std::vector<int> relabel(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& lbl = relabel[static_cast<std::size_t>(membership[i])];
        if (lbl < 0) lbl = next++;
        membership[i] = lbl;
    }
    return membership;
}

}  // namespace entity_embed
