#include "entity_embed/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace entity_embed {

namespace {

using nlohmann::json;

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string lowercased(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_punctuation_token(std::string_view s) {
    return std::none_of(s.begin(), s.end(),
                        [](unsigned char c) { return std::isalnum(c) != 0; });
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

Document document_from_json(const json& j, std::size_t line_no) {
    Document doc;
    doc.id = j.value("id", "");
    const auto& sentences = j.at("sentences");
    if (!sentences.is_array()) parse_fail(line_no, "\"sentences\" must be an array");
    for (const auto& s : sentences) {
        std::vector<Token> sent;
        const auto& tokens = s.at("tokens");
        for (const auto& t : tokens) {
            Token tok;
            tok.text = t.at("t").get<std::string>();
            if (t.contains("pos")) tok.pos = t.at("pos").get<std::string>();
            if (tok.text.empty() || has_whitespace(tok.text))
                parse_fail(line_no, "token surface must be non-empty without whitespace");
            sent.push_back(std::move(tok));
        }
        doc.sentences.push_back(std::move(sent));
    }
    if (j.contains("entities")) {
        for (const auto& e : j.at("entities")) {
            EntitySpan span;
            span.sentence = e.at("s").get<int>();
            span.begin = e.at("b").get<int>();
            span.end = e.at("e").get<int>();
            auto type = entity_type_from(e.at("type").get<std::string>());
            if (!type) parse_fail(line_no, "unknown entity type \"" + e.at("type").get<std::string>() + "\"");
            span.type = *type;
            span.id = e.at("kid").get<std::string>();
            if (span.id.empty() || has_whitespace(span.id))
                parse_fail(line_no, "entity id must be non-empty without whitespace");
            doc.entities.push_back(std::move(span));
        }
    }
    return doc;
}

// true when this token position is covered by an entity span of the sentence
std::vector<char> protected_mask(const std::vector<Token>& sent, int sentence_index,
                                 const std::vector<EntitySpan>& spans) {
    std::vector<char> mask(sent.size(), 0);
    for (std::size_t t = 0; t < sent.size(); ++t)
        if (sent[t].entity) mask[t] = 1;
    for (const auto& span : spans) {
        if (span.sentence != sentence_index) continue;
        for (int t = span.begin; t < span.end; ++t) mask[static_cast<std::size_t>(t)] = 1;
    }
    return mask;
}

}  // namespace

const char* to_string(EntityType t) {
    switch (t) {
        case EntityType::PER: return "PER";
        case EntityType::LOC: return "LOC";
        case EntityType::ORG: return "ORG";
        case EntityType::DATE: return "DATE";
    }
    return "?";
}

std::optional<EntityType> entity_type_from(std::string_view s) {
    if (s == "PER") return EntityType::PER;
    if (s == "LOC") return EntityType::LOC;
    if (s == "ORG") return EntityType::ORG;
    if (s == "DATE") return EntityType::DATE;
    return std::nullopt;
}

std::string entity_key(EntityType type, std::string_view id) {
    std::string key = "@";
    key += to_string(type);
    key += ':';
    key += id;
    return key;
}

std::optional<EntityKeyParts> parse_entity_key(std::string_view key) {
    if (key.empty() || key[0] != '@') return std::nullopt;
    auto colon = key.find(':');
    if (colon == std::string_view::npos || colon + 1 >= key.size()) return std::nullopt;
    auto type = entity_type_from(key.substr(1, colon - 1));
    if (!type) return std::nullopt;
    return EntityKeyParts{*type, std::string(key.substr(colon + 1))};
}

void validate_spans(const Document& doc) {
    for (const auto& span : doc.entities) {
        if (span.sentence < 0 || static_cast<std::size_t>(span.sentence) >= doc.sentences.size())
            throw std::runtime_error("doc " + doc.id + ": span sentence index out of range");
        const auto& sent = doc.sentences[static_cast<std::size_t>(span.sentence)];
        if (span.begin < 0 || span.begin >= span.end ||
            static_cast<std::size_t>(span.end) > sent.size())
            throw std::runtime_error("doc " + doc.id + ": span token range invalid");
    }
    // overlap check per sentence
    std::vector<EntitySpan> sorted = doc.entities;
    std::sort(sorted.begin(), sorted.end(), [](const EntitySpan& a, const EntitySpan& b) {
        return a.sentence != b.sentence ? a.sentence < b.sentence : a.begin < b.begin;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].sentence == sorted[i - 1].sentence && sorted[i].begin < sorted[i - 1].end)
            throw std::runtime_error("doc " + doc.id + ": overlapping entity spans");
    }
}

AnnotatedCorpus parse_annotated(std::istream& in) {
    AnnotatedCorpus out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            ++out.skipped_lines;
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            parse_fail(line_no, e.what());
        }
        Document doc;
        try {
            doc = document_from_json(j, line_no);
        } catch (const json::exception& e) {
            parse_fail(line_no, e.what());
        }
        try {
            validate_spans(doc);
        } catch (const std::exception& e) {
            parse_fail(line_no, e.what());
        }
        out.docs.push_back(std::move(doc));
    }
    return out;
}

Document parse_raw(std::istream& in, std::string doc_id) {
    Document doc;
    doc.id = std::move(doc_id);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<Token> sent;
        std::istringstream words(line);
        std::string w;
        while (words >> w) sent.push_back(Token{std::move(w), "", false});
        if (!sent.empty()) doc.sentences.push_back(std::move(sent));
    }
    return doc;
}

const std::unordered_set<std::string>& default_stoplist() {
    static const std::unordered_set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
        "both", "but", "by", "cannot", "could", "did", "do", "does", "doing", "down", "during",
        "each", "few", "for", "from", "further", "had", "has", "have", "having", "he", "her",
        "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into",
        "is", "it", "its", "itself", "me", "more", "most", "my", "myself", "no", "nor", "not",
        "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours", "ourselves",
        "out", "over", "own", "same", "she", "should", "so", "some", "such", "than", "that",
        "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they",
        "this", "those", "through", "to", "too", "under", "until", "up", "very", "was", "we",
        "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "would", "you", "your", "yours", "yourself", "yourselves"};
    return words;
}

const std::unordered_set<std::string>& default_pos_blocklist() {
    static const std::unordered_set<std::string> tags = {
        // wh-determiners, pronouns, predeterminers, possessive endings
        "WDT", "PRP", "PRP$", "WP", "WP$", "PDT", "POS",
        // auxiliary/modal verbs, prepositions
        "MD", "IN", "TO",
        // punctuation
        ".", ",", ":", ";", "!", "?", "(", ")", "``", "''", "\"", "#", "$", "SYM",
        "-LRB-", "-RRB-", "HYPH", "NFP"};
    return tags;
}

FilterConfig default_filter_config(PipelineMode mode) {
    FilterConfig cfg;
    cfg.mode = mode;
    if (mode == PipelineMode::RAW)
        cfg.stoplist = default_stoplist();
    else
        cfg.pos_blocklist = default_pos_blocklist();
    return cfg;
}

Document filter_tokens(const Document& doc, const FilterConfig& cfg) {
    Document out;
    out.id = doc.id;
    out.sentences.resize(doc.sentences.size());
    // old -> new token index per sentence, for span remapping
    std::vector<std::vector<int>> remap(doc.sentences.size());

    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const auto& sent = doc.sentences[s];
        const auto keep_mask = protected_mask(sent, static_cast<int>(s), doc.entities);
        auto& filtered = out.sentences[s];
        auto& map = remap[s];
        map.assign(sent.size(), -1);
        for (std::size_t t = 0; t < sent.size(); ++t) {
            const Token& tok = sent[t];
            if (!keep_mask[t]) {
                if (cfg.mode == PipelineMode::RAW) {
                    std::string norm = lowercased(tok.text);
                    if (is_punctuation_token(norm) || cfg.stoplist.count(norm)) continue;
                    map[t] = static_cast<int>(filtered.size());
                    filtered.push_back(Token{std::move(norm), tok.pos, false});
                    continue;
                }
                if (cfg.pos_blocklist.count(tok.pos)) continue;
                map[t] = static_cast<int>(filtered.size());
                filtered.push_back(Token{lowercased(tok.text), tok.pos, false});
                continue;
            }
            // entity-protected tokens pass through unchanged
            map[t] = static_cast<int>(filtered.size());
            filtered.push_back(tok);
        }
    }

    out.entities.reserve(doc.entities.size());
    for (const auto& span : doc.entities) {
        EntitySpan moved = span;
        const auto& map = remap[static_cast<std::size_t>(span.sentence)];
        moved.begin = map[static_cast<std::size_t>(span.begin)];
        moved.end = moved.begin + (span.end - span.begin);
        out.entities.push_back(std::move(moved));
    }
    return out;
}

Document apply_annotations(const Document& doc) {
    Document out;
    out.id = doc.id;
    out.sentences.resize(doc.sentences.size());
    out.entities.reserve(doc.entities.size());

    // spans grouped per sentence in begin order; the entities list keeps the
    // original order, so remember where each one landed
    std::vector<std::vector<std::size_t>> by_sentence(doc.sentences.size());
    for (std::size_t e = 0; e < doc.entities.size(); ++e)
        by_sentence[static_cast<std::size_t>(doc.entities[e].sentence)].push_back(e);
    for (auto& group : by_sentence)
        std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
            return doc.entities[a].begin < doc.entities[b].begin;
        });

    std::vector<EntitySpan> new_spans(doc.entities.size());
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const auto& sent = doc.sentences[s];
        auto& collapsed = out.sentences[s];
        std::size_t next = 0;
        auto span_it = by_sentence[s].begin();
        while (next < sent.size()) {
            if (span_it != by_sentence[s].end() &&
                static_cast<std::size_t>(doc.entities[*span_it].begin) == next) {
                const EntitySpan& span = doc.entities[*span_it];
                EntitySpan updated = span;
                updated.begin = static_cast<int>(collapsed.size());
                updated.end = updated.begin + 1;
                new_spans[*span_it] = updated;
                collapsed.push_back(Token{entity_key(span.type, span.id), "", true});
                next = static_cast<std::size_t>(span.end);
                ++span_it;
                continue;
            }
            collapsed.push_back(sent[next]);
            ++next;
        }
    }
    out.entities = std::move(new_spans);
    return out;
}

}  // namespace entity_embed
