#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entity_embed/corpus.hpp"
#include "entity_embed/model.hpp"

namespace entity_embed {

struct RelatednessDataset {
    struct Pair {
        std::string w1, w2;
        double score = 0;
    };
    std::vector<Pair> pairs;
};

struct AnalogyItem {
    std::string a, b, x, y;
    std::optional<EntityType> type;  // typed variant restricts candidates to this class
};

struct AnalogyDataset {
    std::vector<AnalogyItem> items;
};

struct CategorizationDataset {
    struct Item {
        std::string key, category;
    };
    std::vector<Item> items;

    std::size_t num_categories() const;
};

enum class Correlation { PEARSON, SPEARMAN };
enum class ClusterMethod { KMEANS, AGGLOMERATIVE };

// Offset direction for the analogy query vector.
enum class AnalogyCombo {
    A_MINUS_B,  // a - b + x
    B_MINUS_A,  // b - a + x, the common 3CosAdd direction
};

double cosine(std::span<const double> u, std::span<const double> v);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct RelatednessResult {
    double r = 0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

// Correlates pair cosines with human scores; out-of-vocabulary pairs are
// skipped and counted. compose_multiword resolves space-separated keys as the
// mean of their component vectors.
RelatednessResult relatedness_eval(const KeyedVectors& vec, const RelatednessDataset& ds,
                                   Correlation corr, bool compose_multiword = false);

struct AnalogyResult {
    double accuracy = 0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::size_t empty_candidate_items = 0;
};

// Nearest neighbor of the offset vector over the vocabulary minus {a, b, x},
// restricted to the item's entity type when typed; exact-match scoring.
AnalogyResult analogy_eval(const KeyedVectors& vec, const AnalogyDataset& ds, bool typed,
                           AnalogyCombo combo = AnalogyCombo::A_MINUS_B);

// Fraction of items whose cluster majority label matches their own.
double purity(std::span<const int> assignments, std::span<const int> labels);

struct CategorizationResult {
    double purity = 0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

// Clusters the in-vocabulary item vectors into as many clusters as the
// dataset has categories. KMEANS is mini-batch k-means (batch 32, best of 10
// seeded restarts by inertia, 100 iteration cap); AGGLOMERATIVE is Ward
// linkage on Euclidean distance.
CategorizationResult categorization_eval(const KeyedVectors& vec, const CategorizationDataset& ds,
                                         ClusterMethod method, std::uint64_t seed,
                                         bool compose_multiword = false);

struct Neighbor {
    std::string key;
    double cosine = 0;
};

// Top-k by cosine with the query excluded; ties broken by vocabulary index.
// With a type filter only entities of that type are candidates.
std::vector<Neighbor> nearest_neighbors(const KeyedVectors& vec, const std::string& query,
                                        std::size_t k,
                                        std::optional<EntityType> type_filter = std::nullopt);

std::vector<Neighbor> nearest_neighbors_of_vector(const KeyedVectors& vec,
                                                  std::span<const double> query,
                                                  std::size_t k,
                                                  std::optional<EntityType> type_filter = std::nullopt,
                                                  std::optional<std::size_t> exclude = std::nullopt);

// Arithmetic mean of the in-vocabulary component vectors; counts skipped
// components into *oov when given, throws if nothing is in vocabulary.
std::vector<double> compose_multiword(const KeyedVectors& vec, std::span<const std::string> words,
                                      std::size_t* oov = nullptr);

}  // namespace entity_embed
