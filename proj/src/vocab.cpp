#include "entity_embed/vocab.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entity_embed {

Vocabulary::Vocabulary(std::vector<VocabEntry> entries, std::uint64_t total_tokens)
    : entries_(std::move(entries)), total_tokens_(total_tokens) {
    key_to_index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i)
        key_to_index_.emplace(entries_[i].key, static_cast<Index>(i));
    if (key_to_index_.size() != entries_.size())
        throw std::runtime_error("vocabulary keys are not unique");
}

Vocabulary Vocabulary::build(std::span<const Document> docs, std::uint64_t min_count) {
    using CountMap = std::unordered_map<std::string, std::uint64_t>;

    // shard-and-merge counting: per-worker maps summed associatively, so the
    // result is the same for any worker count
    int shards = 1;
#ifdef _OPENMP
    shards = std::max(1, omp_get_max_threads());
#endif
    std::vector<CountMap> partial(static_cast<std::size_t>(shards));
    std::vector<std::uint64_t> partial_total(static_cast<std::size_t>(shards), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(shards)
#endif
    for (std::size_t d = 0; d < docs.size(); ++d) {
        int shard = 0;
#ifdef _OPENMP
        shard = omp_get_thread_num();
#endif
        auto& counts = partial[static_cast<std::size_t>(shard)];
        for (const auto& sent : docs[d].sentences)
            for (const auto& tok : sent) {
                ++counts[tok.text];
                ++partial_total[static_cast<std::size_t>(shard)];
            }
    }

    CountMap counts = std::move(partial[0]);
    std::uint64_t total = partial_total[0];
    for (std::size_t s = 1; s < partial.size(); ++s) {
        for (const auto& [key, c] : partial[s]) counts[key] += c;
        total += partial_total[s];
    }

    std::vector<VocabEntry> entries;
    entries.reserve(counts.size());
    for (auto& [key, c] : counts) {
        if (c < min_count) continue;
        VocabEntry e;
        e.key = key;
        e.freq = c;
        if (auto parts = parse_entity_key(key)) {
            e.kind = Kind::ENTITY;
            e.etype = parts->type;
        }
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw std::runtime_error("vocabulary is empty after frequency filtering");

    std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
        return a.freq != b.freq ? a.freq > b.freq : a.key < b.key;
    });
    return Vocabulary(std::move(entries), total);
}

std::optional<Index> Vocabulary::find(std::string_view key) const {
    auto it = key_to_index_.find(std::string(key));
    if (it == key_to_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::uint64_t> Vocabulary::frequencies() const {
    std::vector<std::uint64_t> out(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = entries_[i].freq;
    return out;
}

IndexedDocument Vocabulary::index_document(const Document& doc) const {
    IndexedDocument out;
    out.id = doc.id;
    out.sentences.reserve(doc.sentences.size());
    for (const auto& sent : doc.sentences) {
        std::vector<Index> ids;
        ids.reserve(sent.size());
        for (const auto& tok : sent) {
            auto it = key_to_index_.find(tok.text);
            if (it != key_to_index_.end()) ids.push_back(it->second);
        }
        out.sentences.push_back(std::move(ids));
    }
    return out;
}

IndexedCorpus Vocabulary::index_corpus(std::span<const Document> docs) const {
    IndexedCorpus out;
    out.reserve(docs.size());
    for (const auto& doc : docs) out.push_back(index_document(doc));
    return out;
}

}  // namespace entity_embed
