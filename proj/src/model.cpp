#include "entity_embed/model.hpp"

#include <cmath>
#include <stdexcept>

namespace entity_embed {

EmbeddingModel EmbeddingModel::make(std::size_t rows, int dim, bool with_context,
                                    bool with_biases) {
    if (dim <= 0) throw std::invalid_argument("dimension must be positive");
    EmbeddingModel m;
    m.rows = rows;
    m.dim = dim;
    m.center.assign(rows * static_cast<std::size_t>(dim), 0.0);
    if (with_context) m.context.assign(rows * static_cast<std::size_t>(dim), 0.0);
    if (with_biases) {
        m.center_bias.assign(rows, 0.0);
        m.context_bias.assign(rows, 0.0);
    }
    return m;
}

bool EmbeddingModel::all_finite() const {
    auto ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    return ok(center) && ok(context) && ok(center_bias) && ok(context_bias);
}

KeyedVectors::KeyedVectors(std::vector<std::string> keys, int dim, std::vector<double> data)
    : dim_(dim), keys_(std::move(keys)), data_(std::move(data)) {
    if (data_.size() != keys_.size() * static_cast<std::size_t>(dim_))
        throw std::invalid_argument("embedding data size does not match keys x dim");
    index_.reserve(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) index_.emplace(keys_[i], i);
    if (index_.size() != keys_.size()) throw std::invalid_argument("duplicate embedding keys");
}

std::optional<std::size_t> KeyedVectors::find(std::string_view key) const {
    auto it = index_.find(std::string(key));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool KeyedVectors::is_entity(std::size_t i) const {
    return parse_entity_key(keys_[i]).has_value();
}

std::optional<EntityType> KeyedVectors::entity_type(std::size_t i) const {
    auto parts = parse_entity_key(keys_[i]);
    if (!parts) return std::nullopt;
    return parts->type;
}

KeyedVectors publish(const EmbeddingModel& model, const std::vector<std::string>& keys,
                     PublishMode mode) {
    if (keys.size() != model.rows)
        throw std::invalid_argument("key count does not match model rows");
    std::vector<double> data(model.center);
    if (mode == PublishMode::SUM) {
        if (!model.has_context()) throw std::invalid_argument("model has no context table to sum");
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += model.context[i];
    }
    return KeyedVectors(keys, model.dim, std::move(data));
}

}  // namespace entity_embed
