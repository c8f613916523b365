#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace entity_embed {

enum class EntityType { PER, LOC, ORG, DATE };

const char* to_string(EntityType t);
std::optional<EntityType> entity_type_from(std::string_view s);

// Canonical key encoding for entity tokens: "@<ETYPE>:<canonical_id>".
// The '@' prefix cannot collide with terms, which are lowercased and never
// start with '@'; identifiers keep their case.
std::string entity_key(EntityType type, std::string_view id);

struct EntityKeyParts {
    EntityType type;
    std::string id;
};
std::optional<EntityKeyParts> parse_entity_key(std::string_view key);

struct Token {
    std::string text;  // surface form; terms are lowercased by filter_tokens
    std::string pos;   // Penn Treebank tag, empty when untagged
    bool entity = false;

    bool operator==(const Token&) const = default;
};

struct EntitySpan {
    int sentence = 0;
    int begin = 0;  // token index, inclusive
    int end = 0;    // token index, exclusive
    EntityType type = EntityType::PER;
    std::string id;  // canonical identifier (Wikidata id, normalized date, ...)

    bool operator==(const EntitySpan&) const = default;
};

struct Document {
    std::string id;
    std::vector<std::vector<Token>> sentences;
    std::vector<EntitySpan> entities;

    bool operator==(const Document&) const = default;
};

// Throws if any span is out of range for its sentence, empty, or overlaps
// another span in the same sentence.
void validate_spans(const Document& doc);

struct AnnotatedCorpus {
    std::vector<Document> docs;
    std::size_t skipped_lines = 0;  // empty input lines
};

// JSON-lines, one document per line:
//   {"id": "...", "sentences": [{"tokens": [{"t": "...", "pos": "..."}]}],
//    "entities": [{"s": 0, "b": 1, "e": 3, "type": "PER", "kid": "Q76"}]}
// Malformed lines and invalid spans throw with the offending line number.
AnnotatedCorpus parse_annotated(std::istream& in);

// Plain text, one sentence per line, whitespace-tokenized.
Document parse_raw(std::istream& in, std::string doc_id = "raw");

enum class PipelineMode { RAW, ANNOTATED };

struct FilterConfig {
    PipelineMode mode = PipelineMode::ANNOTATED;
    std::unordered_set<std::string> stoplist;       // RAW mode
    std::unordered_set<std::string> pos_blocklist;  // ANNOTATED mode
};

// Built-in English stop words for the RAW pipeline.
const std::unordered_set<std::string>& default_stoplist();

// Penn tags for the blocked POS classes: wh-determiners, pronouns, auxiliary
// verbs, predeterminers, possessive endings, prepositions, punctuation.
const std::unordered_set<std::string>& default_pos_blocklist();

FilterConfig default_filter_config(PipelineMode mode);

// Removes stoplist/punctuation tokens (RAW) or blocked-POS tokens (ANNOTATED)
// and lowercases the surviving term tokens. Tokens covered by an entity span
// are never removed; span indices are remapped to the filtered sentence.
Document filter_tokens(const Document& doc, const FilterConfig& cfg);

// Collapses every entity span to a single identifier token and points the
// span at the collapsed position. Spans must be validated first.
Document apply_annotations(const Document& doc);

}  // namespace entity_embed
