#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entity_embed/corpus.hpp"
#include "entity_embed/types.hpp"

namespace entity_embed {

enum class Kind { TERM, ENTITY };

struct VocabEntry {
    std::string key;
    Kind kind = Kind::TERM;
    std::optional<EntityType> etype;
    std::uint64_t freq = 0;
};

// Unified index over terms and entities. Indices are dense and assigned by
// descending frequency with lexicographic tie-breaking, so rebuilding from
// the same input always yields the same vocabulary.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<VocabEntry> entries, std::uint64_t total_tokens);

    // Counts keys over filtered/annotated documents and keeps those with
    // frequency >= min_count. Throws if nothing survives.
    static Vocabulary build(std::span<const Document> docs, std::uint64_t min_count);

    std::size_t size() const { return entries_.size(); }
    const VocabEntry& entry(Index i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<VocabEntry>& entries() const { return entries_; }
    std::uint64_t total_tokens() const { return total_tokens_; }

    std::optional<Index> find(std::string_view key) const;

    // Frequency vector aligned with indices, for negative samplers.
    std::vector<std::uint64_t> frequencies() const;

    // Out-of-vocabulary tokens are skipped; sentence structure is preserved.
    IndexedDocument index_document(const Document& doc) const;
    IndexedCorpus index_corpus(std::span<const Document> docs) const;

private:
    std::vector<VocabEntry> entries_;
    std::unordered_map<std::string, Index> key_to_index_;
    std::uint64_t total_tokens_ = 0;
};

}  // namespace entity_embed
