#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entity_embed {

using Index = std::int32_t;

// A document reduced to vocabulary indices; out-of-vocabulary tokens are
// dropped at encoding time, so every index is valid for the owning vocabulary.
struct IndexedDocument {
    std::string id;
    std::vector<std::vector<Index>> sentences;
};

using IndexedCorpus = std::vector<IndexedDocument>;

}  // namespace entity_embed
