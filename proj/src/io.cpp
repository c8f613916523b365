#include "entity_embed/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace entity_embed::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& what) {
    fail(path, "line " + std::to_string(line_no) + ": " + what);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) fail(path, "cannot open for reading");
    return in;
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) fail(path, line_no, "trailing characters in number \"" + s + "\"");
        if (!std::isfinite(v)) fail(path, line_no, "non-finite number \"" + s + "\"");
        return v;
    } catch (const std::invalid_argument&) {
        fail(path, line_no, "not a number: \"" + s + "\"");
    } catch (const std::out_of_range&) {
        fail(path, line_no, "number out of range: \"" + s + "\"");
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

// shared edge-list writer for graph and matrix files
void save_edges_tsv(const std::vector<std::tuple<Index, Index, double>>& cells,
                    const std::vector<std::string>& keys, std::size_t nodes,
                    const std::string& path) {
    std::vector<std::array<const std::string*, 2>> named;
    named.reserve(cells.size());
    std::vector<double> weights;
    weights.reserve(cells.size());
    std::vector<std::size_t> order(cells.size());
    for (std::size_t n = 0; n < cells.size(); ++n) {
        const auto& [i, j, w] = cells[n];
        const std::string* a = &keys[static_cast<std::size_t>(i)];
        const std::string* b = &keys[static_cast<std::size_t>(j)];
        if (*b < *a) std::swap(a, b);
        named.push_back({a, b});
        weights.push_back(w);
        order[n] = n;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (*named[a][0] != *named[b][0]) return *named[a][0] < *named[b][0];
        return *named[a][1] < *named[b][1];
    });
    auto out = open_out(path);
    out << "#nodes=" << nodes << " edges=" << cells.size() << "\n";
    for (std::size_t n : order)
        out << *named[n][0] << '\t' << *named[n][1] << '\t' << format_double(weights[n]) << "\n";
    if (!out) fail(path, "write failed");
}

struct LoadedEdges {
    CoocMatrix matrix;
    std::vector<std::string> keys;
};

LoadedEdges load_edges_tsv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) fail(path, "empty file");
    ++line_no;
    if (line.rfind("#nodes=", 0) != 0) fail(path, line_no, "missing #nodes= header");

    struct RawEdge {
        std::string a, b;
        double w;
    };
    std::vector<RawEdge> edges;
    std::map<std::string, Index> key_ids;  // ordered: node index by sorted key
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3) fail(path, line_no, "expected src<TAB>dst<TAB>weight");
        const double w = parse_double(path, line_no, fields[2]);
        if (w <= 0.0) fail(path, line_no, "edge weight must be positive");
        if (fields[0] == fields[1]) fail(path, line_no, "self-loop");
        key_ids.emplace(fields[0], 0);
        key_ids.emplace(fields[1], 0);
        edges.push_back({fields[0], fields[1], w});
    }
    LoadedEdges out;
    out.keys.reserve(key_ids.size());
    for (auto& [key, id] : key_ids) {
        id = static_cast<Index>(out.keys.size());
        out.keys.push_back(key);
    }
    for (const auto& e : edges) out.matrix.add(key_ids.at(e.a), key_ids.at(e.b), e.w);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_vocab_tsv(const Vocabulary& vocab, const std::string& path) {
    auto out = open_out(path);
    for (const auto& e : vocab.entries()) {
        out << e.key << '\t' << (e.kind == Kind::TERM ? "TERM" : "ENTITY") << '\t'
            << (e.etype ? to_string(*e.etype) : "-") << '\t' << e.freq << "\n";
    }
    if (!out) fail(path, "write failed");
}

Vocabulary load_vocab_tsv(const std::string& path) {
    auto in = open_in(path);
    std::vector<VocabEntry> entries;
    std::uint64_t total = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 4) fail(path, line_no, "expected key<TAB>kind<TAB>etype<TAB>frequency");
        VocabEntry e;
        e.key = fields[0];
        if (fields[1] == "TERM")
            e.kind = Kind::TERM;
        else if (fields[1] == "ENTITY")
            e.kind = Kind::ENTITY;
        else
            fail(path, line_no, "unknown kind \"" + fields[1] + "\"");
        if (fields[2] != "-") {
            auto t = entity_type_from(fields[2]);
            if (!t) fail(path, line_no, "unknown entity type \"" + fields[2] + "\"");
            e.etype = t;
        }
        e.freq = std::stoull(fields[3]);
        total += e.freq;
        entries.push_back(std::move(e));
    }
    if (entries.empty()) fail(path, "empty vocabulary file");
    return Vocabulary(std::move(entries), total);
}

void save_embeddings_text(const KeyedVectors& vec, const std::string& path) {
    auto out = open_out(path);
    out << vec.size() << ' ' << vec.dim() << "\n";
    for (std::size_t i = 0; i < vec.size(); ++i) {
        out << vec.key(i);
        for (double v : vec.row(i)) out << ' ' << format_double(v);
        out << "\n";
    }
    if (!out) fail(path, "write failed");
}

void save_embeddings_binary(const KeyedVectors& vec, const std::string& path) {
    auto out = open_out(path, true);
    out << "EEBIN " << vec.size() << ' ' << vec.dim() << "\n";
    for (std::size_t i = 0; i < vec.size(); ++i) {
        out << vec.key(i) << ' ';
        const auto row = vec.row(i);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
        out << "\n";
    }
    if (!out) fail(path, "write failed");
}

KeyedVectors load_embeddings(const std::string& path) {
    auto in = open_in(path, true);
    std::string header;
    if (!std::getline(in, header)) fail(path, "empty file");
    std::istringstream hs(header);
    std::string first;
    hs >> first;
    const bool binary = first == "EEBIN";
    std::size_t n = 0;
    int dim = 0;
    if (binary) {
        hs >> n >> dim;
    } else {
        try {
            n = std::stoull(first);
        } catch (const std::exception&) {
            fail(path, "malformed embedding header");
        }
        hs >> dim;
    }
    if (n == 0 || dim <= 0) fail(path, "malformed embedding header");

    std::vector<std::string> keys;
    keys.reserve(n);
    std::vector<double> data;
    data.reserve(n * static_cast<std::size_t>(dim));

    if (binary) {
        for (std::size_t i = 0; i < n; ++i) {
            std::string key;
            char c;
            while (in.get(c) && c != ' ') key += c;
            if (key.empty()) fail(path, "truncated binary record");
            std::vector<double> row(static_cast<std::size_t>(dim));
            in.read(reinterpret_cast<char*>(row.data()),
                    static_cast<std::streamsize>(row.size() * sizeof(double)));
            if (!in) fail(path, "truncated binary record");
            in.get(c);  // trailing newline
            keys.push_back(std::move(key));
            data.insert(data.end(), row.begin(), row.end());
        }
    } else {
        std::string line;
        std::size_t line_no = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(in, line)) fail(path, "expected " + std::to_string(n) + " rows");
            ++line_no;
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key.empty()) fail(path, line_no, "missing key");
            keys.push_back(key);
            for (int k = 0; k < dim; ++k) {
                double v;
                if (!(ls >> v)) fail(path, line_no, "expected " + std::to_string(dim) + " values");
                data.push_back(v);
            }
        }
    }
    return KeyedVectors(std::move(keys), dim, std::move(data));
}

void save_graph_tsv(const CoocGraph& g, const std::vector<std::string>& keys,
                    const std::string& path) {
    std::vector<std::tuple<Index, Index, double>> cells;
    std::size_t nodes = 0;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const auto nbrs = g.neighbors(static_cast<Index>(i));
        if (!nbrs.empty()) ++nodes;
        for (const auto& [j, w] : nbrs)
            if (static_cast<std::size_t>(j) > i) cells.emplace_back(static_cast<Index>(i), j, w);
    }
    save_edges_tsv(cells, keys, nodes, path);
}

LoadedGraph load_graph_tsv(const std::string& path) {
    auto edges = load_edges_tsv(path);
    LoadedGraph out;
    out.graph = CoocGraph::from_matrix(edges.keys.size(), edges.matrix);
    out.keys = std::move(edges.keys);
    return out;
}

void save_matrix_tsv(const CoocMatrix& m, const std::vector<std::string>& keys,
                     const std::string& path) {
    std::vector<char> seen(keys.size(), 0);
    const auto cells = m.sorted_cells();
    for (const auto& [i, j, w] : cells) {
        seen[static_cast<std::size_t>(i)] = 1;
        seen[static_cast<std::size_t>(j)] = 1;
    }
    const auto nodes = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
    save_edges_tsv(cells, keys, nodes, path);
}

LoadedMatrix load_matrix_tsv(const std::string& path) {
    auto edges = load_edges_tsv(path);
    return {std::move(edges.matrix), std::move(edges.keys)};
}

void save_corpus_cache(const IndexedCorpus& corpus, PipelineMode mode, const std::string& path) {
    auto out = open_out(path);
    out << "#cache mode=" << (mode == PipelineMode::RAW ? "raw" : "annotated") << "\n";
    for (const auto& doc : corpus) {
        out << "#doc\t" << doc.id << '\t' << doc.sentences.size() << "\n";
        for (const auto& sent : doc.sentences) {
            for (std::size_t t = 0; t < sent.size(); ++t) {
                if (t) out << ' ';
                out << sent[t];
            }
            out << "\n";
        }
    }
    if (!out) fail(path, "write failed");
}

LoadedCache load_corpus_cache(const std::string& path) {
    auto in = open_in(path);
    LoadedCache out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) fail(path, "empty cache");
    ++line_no;
    if (line == "#cache mode=raw")
        out.mode = PipelineMode::RAW;
    else if (line == "#cache mode=annotated")
        out.mode = PipelineMode::ANNOTATED;
    else
        fail(path, line_no, "missing cache header");

    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("#doc\t", 0) != 0) fail(path, line_no, "expected #doc header");
        const auto fields = split_tabs(line);
        if (fields.size() != 3) fail(path, line_no, "malformed #doc header");
        IndexedDocument doc;
        doc.id = fields[1];
        const auto sentences = std::stoull(fields[2]);
        for (std::size_t s = 0; s < sentences; ++s) {
            if (!std::getline(in, line)) fail(path, line_no, "truncated document");
            ++line_no;
            std::vector<Index> sent;
            std::istringstream ls(line);
            long long id;
            while (ls >> id) sent.push_back(static_cast<Index>(id));
            doc.sentences.push_back(std::move(sent));
        }
        out.corpus.push_back(std::move(doc));
    }
    return out;
}

RelatednessDataset load_relatedness_tsv(const std::string& path) {
    auto in = open_in(path);
    RelatednessDataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3) fail(path, line_no, "expected word1<TAB>word2<TAB>score");
        ds.pairs.push_back({fields[0], fields[1], parse_double(path, line_no, fields[2])});
    }
    return ds;
}

AnalogyDataset load_analogy(const std::string& path) {
    auto in = open_in(path);
    AnalogyDataset ds;
    std::optional<EntityType> section_type;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == ':') {
            section_type.reset();
            const auto marker = line.find("#type=");
            if (marker != std::string::npos) {
                std::istringstream ts(line.substr(marker + 6));
                std::string name;
                ts >> name;
                auto t = entity_type_from(name);
                if (!t) fail(path, line_no, "unknown entity type \"" + name + "\"");
                section_type = t;
            }
            continue;
        }
        std::istringstream ls(line);
        AnalogyItem item;
        if (!(ls >> item.a >> item.b >> item.x >> item.y))
            fail(path, line_no, "expected four keys");
        if (item.a == item.b) fail(path, line_no, "degenerate item: a equals b");
        item.type = section_type;
        ds.items.push_back(std::move(item));
    }
    return ds;
}

CategorizationDataset load_categorization_tsv(const std::string& path) {
    auto in = open_in(path);
    CategorizationDataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2) fail(path, line_no, "expected key<TAB>category");
        ds.items.push_back({fields[0], fields[1]});
    }
    return ds;
}

std::unordered_set<std::string> load_stoplist(const std::string& path) {
    auto in = open_in(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string w;
        if (ls >> w) words.insert(w);
    }
    return words;
}

}  // namespace entity_embed::io
