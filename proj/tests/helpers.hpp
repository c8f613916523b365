#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "entity_embed/cooc.hpp"
#include "entity_embed/model.hpp"
#include "entity_embed/rng.hpp"
#include "entity_embed/types.hpp"

namespace test_support {

using namespace entity_embed;

inline double gaussian(Rng& rng) {
    // Box-Muller; one value per call keeps the stream simple
    double u = rng.next_double();
    while (u == 0.0) u = rng.next_double();
    const double v = rng.next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
}

inline std::vector<double> random_vector(int dim, Rng& rng, double scale = 1.0) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = scale * gaussian(rng);
    return v;
}

// relative-error check with an absolute floor, the usual gradient-check form
inline double rel_error(double a, double b) {
    const double denom = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / denom;
}

// central finite difference of f at x with step h
template <typename F>
double central_diff(F&& f, double& x, double h = 1e-6) {
    const double saved = x;
    x = saved + h;
    const double up = f();
    x = saved - h;
    const double down = f();
    x = saved;
    return (up - down) / (2.0 * h);
}

// Two disjoint topic vocabularies with a skewed (Zipf-like) unigram draw.
// Most sentences stay within one topic; a small fraction mixes both, the way
// real topical text does. The mixed sentences matter for GloVe: with topic-
// pure sentences only, the observed log-count block is additively separable
// and the bias terms absorb the entire topic structure, leaving the vectors
// without any separation signal at convergence.
inline IndexedCorpus two_topic_corpus(int words_per_topic, int sentences_per_topic,
                                      int sentence_len, std::uint64_t seed,
                                      double mix_fraction = 0.08) {
    Rng rng(seed);
    IndexedCorpus corpus;
    IndexedDocument doc;
    doc.id = "synthetic";
    auto draw = [&](int topic) {
        const double u = rng.next_double();
        return static_cast<Index>(topic * words_per_topic) +
               static_cast<Index>(u * u * words_per_topic);
    };
    for (int topic = 0; topic < 2; ++topic) {
        for (int s = 0; s < sentences_per_topic; ++s) {
            const bool mixed = rng.next_double() < mix_fraction;
            std::vector<Index> sent(static_cast<std::size_t>(sentence_len));
            for (auto& t : sent)
                t = draw(mixed ? static_cast<int>(rng.bounded(2)) : topic);
            doc.sentences.push_back(std::move(sent));
        }
    }
    corpus.push_back(std::move(doc));
    return corpus;
}

struct TopicCosines {
    double intra = 0, inter = 0;
};

// mean cosine within vs across the two topic halves of a published table
inline TopicCosines topic_cosines(const KeyedVectors& vec, int words_per_topic) {
    auto cos_at = [&](std::size_t i, std::size_t j) {
        const auto u = vec.row(i), v = vec.row(j);
        double uu = 0, vv = 0, uv = 0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            uu += u[k] * u[k];
            vv += v[k] * v[k];
            uv += u[k] * v[k];
        }
        return uv / std::sqrt(uu * vv);
    };
    TopicCosines out;
    std::size_t intra_n = 0, inter_n = 0;
    const auto w = static_cast<std::size_t>(words_per_topic);
    for (std::size_t i = 0; i < 2 * w; ++i)
        for (std::size_t j = i + 1; j < 2 * w; ++j) {
            const bool same = (i < w) == (j < w);
            if (same) {
                out.intra += cos_at(i, j);
                ++intra_n;
            } else {
                out.inter += cos_at(i, j);
                ++inter_n;
            }
        }
    out.intra /= static_cast<double>(intra_n);
    out.inter /= static_cast<double>(inter_n);
    return out;
}

// two k-cliques joined by a single bridge edge between node 0 and node k
inline CoocGraph barbell_graph(int clique_size) {
    CoocMatrix m;
    for (int side = 0; side < 2; ++side) {
        const Index base = side * clique_size;
        for (int a = 0; a < clique_size; ++a)
            for (int b = a + 1; b < clique_size; ++b)
                m.add(base + a, base + b, 1.0);
    }
    m.add(0, clique_size, 1.0);
    return CoocGraph::from_matrix(static_cast<std::size_t>(2 * clique_size), m);
}

// random connected-ish weighted graph for property tests
inline CoocGraph random_graph(int max_nodes, Rng& rng) {
    const int n = 2 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_nodes - 1)));
    CoocMatrix m;
    for (int i = 1; i < n; ++i)
        m.add(static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(i))), i,
              0.1 + 4.0 * rng.next_double());
    for (int extra = 0; extra < n; ++extra) {
        const auto i = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n)));
        const auto j = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n)));
        if (i != j) m.add(i, j, 0.1 + 4.0 * rng.next_double());
    }
    return CoocGraph::from_matrix(static_cast<std::size_t>(n), m);
}

}  // namespace test_support
