#pragma once

#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "entity_embed/cooc.hpp"
#include "entity_embed/corpus.hpp"
#include "entity_embed/eval.hpp"
#include "entity_embed/model.hpp"
#include "entity_embed/types.hpp"
#include "entity_embed/vocab.hpp"

namespace entity_embed::io {

// Doubles are written with enough digits to round-trip exactly, which is what
// makes rebuilt artifacts byte-identical.
std::string format_double(double v);

// Vocabulary TSV: key<TAB>kind<TAB>etype<TAB>frequency, sorted by index.
void save_vocab_tsv(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab_tsv(const std::string& path);

// Embedding text format: "<n> <dim>" header, then "key v1 ... vdim" rows.
// Binary format: "EEBIN <n> <dim>" header line, then key + ' ' + dim raw
// doubles + '\n' per row.
void save_embeddings_text(const KeyedVectors& vec, const std::string& path);
void save_embeddings_binary(const KeyedVectors& vec, const std::string& path);
KeyedVectors load_embeddings(const std::string& path);

// Edge list TSV with a "#nodes=<n> edges=<m>" header; one line per undirected
// edge, src_key < dst_key lexicographically, sorted.
void save_graph_tsv(const CoocGraph& g, const std::vector<std::string>& keys,
                    const std::string& path);

struct LoadedGraph {
    CoocGraph graph;
    std::vector<std::string> keys;  // node index -> key, sorted lexicographically
};
LoadedGraph load_graph_tsv(const std::string& path);

// Cooccurrence matrix in the same TSV format.
void save_matrix_tsv(const CoocMatrix& m, const std::vector<std::string>& keys,
                     const std::string& path);
struct LoadedMatrix {
    CoocMatrix matrix;
    std::vector<std::string> keys;
};
LoadedMatrix load_matrix_tsv(const std::string& path);

// Index-encoded corpus cache produced by `ingest` and consumed by the
// trainers and the graph builder.
void save_corpus_cache(const IndexedCorpus& corpus, PipelineMode mode, const std::string& path);
struct LoadedCache {
    IndexedCorpus corpus;
    PipelineMode mode = PipelineMode::RAW;
};
LoadedCache load_corpus_cache(const std::string& path);

// Evaluation datasets.
RelatednessDataset load_relatedness_tsv(const std::string& path);
// Google analogy text format: ": section [#type=ETYPE]" headers, then four
// space-separated keys per line.
AnalogyDataset load_analogy(const std::string& path);
CategorizationDataset load_categorization_tsv(const std::string& path);

std::unordered_set<std::string> load_stoplist(const std::string& path);

}  // namespace entity_embed::io
