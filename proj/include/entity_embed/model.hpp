#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "entity_embed/corpus.hpp"

namespace entity_embed {

// Trainer state: center table, optional context table and per-index biases.
// Rows are vocabulary (or graph node) indices.
struct EmbeddingModel {
    std::size_t rows = 0;
    int dim = 0;
    std::vector<double> center;
    std::vector<double> context;
    std::vector<double> center_bias;
    std::vector<double> context_bias;

    static EmbeddingModel make(std::size_t rows, int dim, bool with_context, bool with_biases);

    bool has_context() const { return !context.empty(); }
    bool has_biases() const { return !center_bias.empty(); }

    std::span<double> center_row(std::size_t i) {
        return {center.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    std::span<const double> center_row(std::size_t i) const {
        return {center.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    std::span<double> context_row(std::size_t i) {
        return {context.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    std::span<const double> context_row(std::size_t i) const {
        return {context.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }

    bool all_finite() const;
};

// Published embedding: string keys plus one vector per key, the shape that
// embedding files store and every evaluation task consumes.
class KeyedVectors {
public:
    KeyedVectors() = default;
    KeyedVectors(std::vector<std::string> keys, int dim, std::vector<double> data);

    std::size_t size() const { return keys_.size(); }
    int dim() const { return dim_; }
    const std::string& key(std::size_t i) const { return keys_[i]; }
    const std::vector<std::string>& keys() const { return keys_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    std::optional<std::size_t> find(std::string_view key) const;

    bool is_entity(std::size_t i) const;
    std::optional<EntityType> entity_type(std::size_t i) const;

    const std::vector<double>& data() const { return data_; }

private:
    int dim_ = 0;
    std::vector<std::string> keys_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class PublishMode {
    CENTER,  // center table only (skip-gram, DeepWalk, VERSE)
    SUM,     // center + context (GloVe convention)
};

KeyedVectors publish(const EmbeddingModel& model, const std::vector<std::string>& keys,
                     PublishMode mode);

}  // namespace entity_embed
