// entity_embed: joint word and entity embeddings from annotated corpora.
//
// Subcommands wire the pipeline end to end: ingest -> build-graph -> train ->
// eval / neighbors / export-projection. Every trained or built artifact is
// reproducible from its seed with one worker; `train` writes a JSON manifest
// that fully determines a rerun.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entity_embed/cooc.hpp"
#include "entity_embed/corpus.hpp"
#include "entity_embed/eval.hpp"
#include "entity_embed/glove.hpp"
#include "entity_embed/graph_embed.hpp"
#include "entity_embed/io.hpp"
#include "entity_embed/model.hpp"
#include "entity_embed/pca.hpp"
#include "entity_embed/sgns.hpp"
#include "entity_embed/vocab.hpp"

namespace ee = entity_embed;
using nlohmann::json;

namespace {

std::uint64_t env_seed_fallback() {
    if (const char* env = std::getenv("ENTITY_EMBED_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::runtime_error("ENTITY_EMBED_SEED is not an integer");
        }
    }
    return 1;
}

char kind_letter(const ee::KeyedVectors& vec, std::size_t i) {
    const auto type = vec.entity_type(i);
    if (!type) return 'T';
    switch (*type) {
        case ee::EntityType::PER: return 'P';
        case ee::EntityType::LOC: return 'L';
        case ee::EntityType::ORG: return 'O';
        case ee::EntityType::DATE: return 'D';
    }
    return 'T';
}

// ---------------------------------------------------------------- ingest ---

struct IngestArgs {
    std::string corpus_path;
    std::string mode = "annotated";
    std::uint64_t min_count = 3;
    std::string stoplist_path;
    std::string pos_blocklist_path;
    std::string vocab_out = "vocab.tsv";
    std::string cache_out = "corpus.cache";
};

int run_ingest(const IngestArgs& args) {
    const auto mode =
        args.mode == "raw" ? ee::PipelineMode::RAW : ee::PipelineMode::ANNOTATED;

    ee::FilterConfig filter = ee::default_filter_config(mode);
    if (!args.stoplist_path.empty()) filter.stoplist = ee::io::load_stoplist(args.stoplist_path);
    if (!args.pos_blocklist_path.empty())
        filter.pos_blocklist = ee::io::load_stoplist(args.pos_blocklist_path);

    std::ifstream in(args.corpus_path);
    if (!in) throw std::runtime_error(args.corpus_path + ": cannot open corpus");

    std::vector<ee::Document> docs;
    std::size_t skipped_lines = 0;
    if (mode == ee::PipelineMode::ANNOTATED) {
        auto parsed = ee::parse_annotated(in);
        skipped_lines = parsed.skipped_lines;
        docs.reserve(parsed.docs.size());
        // fixed pipeline order: collapse entities first, then filter
        for (auto& doc : parsed.docs)
            docs.push_back(ee::filter_tokens(ee::apply_annotations(doc), filter));
    } else {
        docs.push_back(ee::filter_tokens(ee::parse_raw(in), filter));
    }

    const auto vocab = ee::Vocabulary::build(docs, args.min_count);
    const auto corpus = vocab.index_corpus(docs);
    ee::io::save_vocab_tsv(vocab, args.vocab_out);
    ee::io::save_corpus_cache(corpus, mode, args.cache_out);

    std::size_t sentences = 0, tokens = 0, entities = 0;
    for (const auto& doc : corpus) {
        sentences += doc.sentences.size();
        for (const auto& sent : doc.sentences) tokens += sent.size();
    }
    for (const auto& e : vocab.entries())
        if (e.kind == ee::Kind::ENTITY) ++entities;

    std::cout << "documents: " << corpus.size() << "\n"
              << "sentences: " << sentences << "\n"
              << "tokens kept: " << tokens << "\n"
              << "vocabulary: " << vocab.size() << " (" << entities << " entities)\n";
    if (skipped_lines > 0) std::cerr << "warning: skipped " << skipped_lines << " empty lines\n";
    return 0;
}

// ----------------------------------------------------------- build-graph ---

struct BuildGraphArgs {
    std::string cache_path = "corpus.cache";
    std::string vocab_path = "vocab.tsv";
    std::string out = "graph.tsv";
    int entity_window = 5;
    std::string decay = "inv";
    double edge_floor = 0.0;
    int workers = 1;
};

int run_build_graph(const BuildGraphArgs& args) {
    const auto cache = ee::io::load_corpus_cache(args.cache_path);
    if (cache.mode == ee::PipelineMode::RAW)
        throw std::runtime_error("graph building needs an annotated corpus cache");
    const auto vocab = ee::io::load_vocab_tsv(args.vocab_path);

    ee::GraphBuildConfig cfg;
    cfg.entity_window = args.entity_window;
    cfg.decay = args.decay == "exp" ? ee::GraphBuildConfig::Decay::EXP
                                    : ee::GraphBuildConfig::Decay::INV_DIST;
    cfg.edge_floor = args.edge_floor;

    std::vector<char> is_entity(vocab.size(), 0);
    std::vector<std::string> keys;
    keys.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        is_entity[i] = vocab.entry(static_cast<ee::Index>(i)).kind == ee::Kind::ENTITY ? 1 : 0;
        keys.push_back(vocab.entry(static_cast<ee::Index>(i)).key);
    }

    const auto graph = ee::build_graph(cache.corpus, is_entity, cfg, args.workers);
    ee::io::save_graph_tsv(graph, keys, args.out);

    const auto st = ee::graph_stats(graph);
    std::cout << "nodes: " << st.nodes << "\nedges: " << st.edges << "\n";
    if (st.edges > 0)
        std::cout << "weight quantiles: min=" << st.weight_min << " q25=" << st.weight_q25
                  << " median=" << st.weight_median << " q75=" << st.weight_q75
                  << " max=" << st.weight_max << "\n";
    return 0;
}

// ------------------------------------------------------------------ train --

struct TrainArgs {
    std::string method = "w2v";
    std::string pipeline = "raw";
    std::string cache_path;
    std::string vocab_path;
    std::string graph_path;
    std::string out = "embeddings.txt";
    std::string manifest_path;
    std::string from_manifest;
    std::string dump_walks;
    std::string dump_matrix;
    bool binary = false;
    bool preset_paper = false;
    bool weighted_positives = false;
    int dim = 100;
    int window = 10;
    int negatives = -1;       // resolved per method
    double learning_rate = -1.0;
    int epochs = 100;
    double subsample = 0.0;
    double x_max = 1000.0;
    double alpha = 0.5;
    int walks_per_node = 100;
    int walk_length = 4;
    std::uint64_t samples = 50000;
    std::string publish = "sum";  // glove: sum (center + context) or center
    std::uint64_t seed = 0;       // 0: resolve from env or 1
    int workers = 1;

    // which flags the user actually set, for preset/default resolution
    bool user_negatives = false, user_lr = false;
};

void apply_method_defaults(TrainArgs& a) {
    const bool annotated = a.pipeline == "annotated";
    double default_lr = 0.015;
    int default_negatives = annotated ? 16 : 8;
    if (a.method == "glove") default_lr = 0.06;
    if (a.method == "deepwalk_id" || a.method == "deepwalk_log") default_negatives = 64;
    if (a.method == "verse") {
        default_lr = 0.025;
        default_negatives = 16;
    }
    if (a.preset_paper || !a.user_lr || a.learning_rate <= 0.0) a.learning_rate = default_lr;
    if (a.preset_paper || !a.user_negatives || a.negatives < 0) a.negatives = default_negatives;
    if (a.preset_paper) {
        a.dim = 100;
        a.window = 10;
        a.epochs = 100;
        a.x_max = 1000.0;
        a.alpha = 0.5;
        a.walks_per_node = 100;
        a.walk_length = 4;
        a.samples = 50000;
        a.subsample = 0.0;
    }
}

json train_config_json(const TrainArgs& a) {
    json cfg{{"method", a.method},       {"pipeline", a.pipeline},
             {"dim", a.dim},             {"seed", a.seed},
             {"workers", a.workers},     {"binary", a.binary}};
    if (a.method == "w2v" || a.method == "deepwalk_id" || a.method == "deepwalk_log") {
        cfg["window"] = a.window;
        cfg["negatives"] = a.negatives;
        cfg["learning_rate"] = a.learning_rate;
        cfg["epochs"] = a.epochs;
        cfg["subsample"] = a.subsample;
    }
    if (a.method == "glove") {
        cfg["window"] = a.window;
        cfg["learning_rate"] = a.learning_rate;
        cfg["epochs"] = a.epochs;
        cfg["x_max"] = a.x_max;
        cfg["alpha"] = a.alpha;
        cfg["publish"] = a.publish;
    }
    if (a.method == "deepwalk_id" || a.method == "deepwalk_log") {
        cfg["walks_per_node"] = a.walks_per_node;
        cfg["walk_length"] = a.walk_length;
    }
    if (a.method == "verse") {
        cfg["negatives"] = a.negatives;
        cfg["learning_rate"] = a.learning_rate;
        cfg["samples"] = a.samples;
        cfg["weighted_positives"] = a.weighted_positives;
    }
    return cfg;
}

void load_manifest_into(TrainArgs& a, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open manifest");
    json m = json::parse(in);
    const json& cfg = m.at("config");
    a.method = cfg.at("method").get<std::string>();
    a.pipeline = cfg.at("pipeline").get<std::string>();
    a.dim = cfg.at("dim").get<int>();
    a.seed = cfg.at("seed").get<std::uint64_t>();
    a.workers = cfg.at("workers").get<int>();
    a.binary = cfg.at("binary").get<bool>();
    if (cfg.contains("window")) a.window = cfg["window"].get<int>();
    if (cfg.contains("negatives")) a.negatives = cfg["negatives"].get<int>();
    if (cfg.contains("learning_rate")) a.learning_rate = cfg["learning_rate"].get<double>();
    if (cfg.contains("epochs")) a.epochs = cfg["epochs"].get<int>();
    if (cfg.contains("subsample")) a.subsample = cfg["subsample"].get<double>();
    if (cfg.contains("x_max")) a.x_max = cfg["x_max"].get<double>();
    if (cfg.contains("alpha")) a.alpha = cfg["alpha"].get<double>();
    if (cfg.contains("walks_per_node")) a.walks_per_node = cfg["walks_per_node"].get<int>();
    if (cfg.contains("walk_length")) a.walk_length = cfg["walk_length"].get<int>();
    if (cfg.contains("samples")) a.samples = cfg["samples"].get<std::uint64_t>();
    if (cfg.contains("publish")) a.publish = cfg["publish"].get<std::string>();
    if (cfg.contains("weighted_positives"))
        a.weighted_positives = cfg["weighted_positives"].get<bool>();
    const json& inputs = m.at("inputs");
    if (inputs.contains("corpus_cache")) a.cache_path = inputs["corpus_cache"].get<std::string>();
    if (inputs.contains("vocab")) a.vocab_path = inputs["vocab"].get<std::string>();
    if (inputs.contains("graph")) a.graph_path = inputs["graph"].get<std::string>();
    a.out = m.at("output").get<std::string>();
    a.user_lr = a.user_negatives = true;  // manifest values are authoritative
}

int run_train(TrainArgs args) {
    if (!args.from_manifest.empty()) load_manifest_into(args, args.from_manifest);
    if (args.seed == 0) args.seed = env_seed_fallback();
    apply_method_defaults(args);

    const bool graph_method =
        args.method == "deepwalk_id" || args.method == "deepwalk_log" || args.method == "verse";
    if (graph_method && args.graph_path.empty())
        throw std::runtime_error(args.method + " needs --graph");
    if (!graph_method && args.cache_path.empty())
        throw std::runtime_error(args.method + " needs --cache");
    if (!graph_method && args.vocab_path.empty())
        throw std::runtime_error(args.method + " needs --vocab");

    const auto started = std::chrono::steady_clock::now();
    ee::TrainStats stats;
    ee::KeyedVectors published;

    if (!graph_method) {
        const auto cache = ee::io::load_corpus_cache(args.cache_path);
        if (args.pipeline == "annotated" && cache.mode != ee::PipelineMode::ANNOTATED)
            throw std::runtime_error("pipeline is annotated but the cache is raw");
        const auto vocab = ee::io::load_vocab_tsv(args.vocab_path);
        std::vector<std::string> keys;
        keys.reserve(vocab.size());
        for (std::size_t i = 0; i < vocab.size(); ++i)
            keys.push_back(vocab.entry(static_cast<ee::Index>(i)).key);

        if (args.method == "w2v") {
            ee::SgnsConfig cfg;
            cfg.dim = args.dim;
            cfg.window = args.window;
            cfg.negatives = args.negatives;
            cfg.learning_rate = args.learning_rate;
            cfg.epochs = args.epochs;
            cfg.subsample = args.subsample;
            cfg.seed = args.seed;
            cfg.workers = args.workers;
            const auto model = ee::train_sgns(cache.corpus, vocab.size(), cfg, &stats);
            published = ee::publish(model, keys, ee::PublishMode::CENTER);
        } else if (args.method == "glove") {
            const auto x = ee::accumulate_glove_counts(cache.corpus, args.window, args.workers);
            if (!args.dump_matrix.empty()) ee::io::save_matrix_tsv(x, keys, args.dump_matrix);
            ee::GloveConfig cfg;
            cfg.dim = args.dim;
            cfg.x_max = args.x_max;
            cfg.alpha = args.alpha;
            cfg.learning_rate = args.learning_rate;
            cfg.epochs = args.epochs;
            cfg.seed = args.seed;
            cfg.workers = args.workers;
            const auto model = ee::train_glove(x, vocab.size(), cfg, &stats);
            published = ee::publish(model, keys,
                                    args.publish == "center" ? ee::PublishMode::CENTER
                                                             : ee::PublishMode::SUM);
        } else {
            throw std::runtime_error("unknown method \"" + args.method + "\"");
        }
    } else {
        const auto loaded = ee::io::load_graph_tsv(args.graph_path);
        if (args.method == "verse") {
            ee::VerseConfig cfg;
            cfg.dim = args.dim;
            cfg.negatives = args.negatives;
            cfg.learning_rate = args.learning_rate;
            cfg.samples = args.samples;
            cfg.weighted_positives = args.weighted_positives;
            cfg.seed = args.seed;
            cfg.workers = args.workers;
            const auto model = ee::verse_train(loaded.graph, cfg, &stats);
            published = ee::publish(model, loaded.keys, ee::PublishMode::CENTER);
        } else {
            ee::WalkConfig wcfg;
            wcfg.walks_per_node = args.walks_per_node;
            wcfg.walk_length = args.walk_length;
            wcfg.weight_norm = args.method == "deepwalk_log" ? ee::WeightNorm::LOG
                                                             : ee::WeightNorm::ID;
            wcfg.seed = args.seed;
            wcfg.workers = args.workers;
            if (!args.dump_walks.empty()) {
                const auto walks = ee::generate_walk_corpus(loaded.graph, wcfg);
                std::ofstream out(args.dump_walks);
                if (!out) throw std::runtime_error(args.dump_walks + ": cannot open for writing");
                for (const auto& walk : walks[0].sentences) {
                    for (std::size_t t = 0; t < walk.size(); ++t) {
                        if (t) out << ' ';
                        out << loaded.keys[static_cast<std::size_t>(walk[t])];
                    }
                    out << "\n";
                }
            }
            ee::SgnsConfig scfg;
            scfg.dim = args.dim;
            scfg.negatives = args.negatives;
            scfg.learning_rate = args.learning_rate;
            scfg.epochs = args.epochs;
            scfg.seed = args.seed;
            scfg.workers = args.workers;
            const auto model = ee::deepwalk_train(loaded.graph, wcfg, scfg, &stats);
            published = ee::publish(model, loaded.keys, ee::PublishMode::CENTER);
        }
    }

    if (args.binary)
        ee::io::save_embeddings_binary(published, args.out);
    else
        ee::io::save_embeddings_text(published, args.out);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json manifest{{"command", "train"},
                  {"config", train_config_json(args)},
                  {"inputs", json::object()},
                  {"output", args.out},
                  {"wall_time_sec", wall},
                  {"final_loss", stats.final_loss()}};
    if (!graph_method) {
        manifest["inputs"]["corpus_cache"] = args.cache_path;
        manifest["inputs"]["vocab"] = args.vocab_path;
    } else {
        manifest["inputs"]["graph"] = args.graph_path;
    }
    const std::string manifest_path =
        args.manifest_path.empty() ? args.out + ".manifest.json" : args.manifest_path;
    std::ofstream mout(manifest_path);
    if (!mout) throw std::runtime_error(manifest_path + ": cannot open for writing");
    mout << manifest.dump(2) << "\n";

    std::cout << "vectors: " << published.size() << " x " << published.dim() << "\n"
              << "final loss: " << stats.final_loss() << "\n"
              << "wall time: " << wall << " s\n";
    return 0;
}

// ------------------------------------------------------------------- eval --

struct EvalArgs {
    std::string model_path;
    std::vector<std::string> tasks;
    bool typed = false;
    bool compose = false;
    std::string correlation = "pearson";
    std::string cluster = "kmeans";
    std::string combo = "a-b+x";
    std::string out;
    std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& args) {
    if (args.tasks.empty()) throw std::runtime_error("no --task given");
    const auto vec = ee::io::load_embeddings(args.model_path);
    const auto seed = args.seed == 0 ? env_seed_fallback() : args.seed;
    const auto corr = args.correlation == "spearman" ? ee::Correlation::SPEARMAN
                                                     : ee::Correlation::PEARSON;
    const auto method = args.cluster == "agglomerative" ? ee::ClusterMethod::AGGLOMERATIVE
                                                        : ee::ClusterMethod::KMEANS;
    const auto combo = args.combo == "b-a+x" ? ee::AnalogyCombo::B_MINUS_A
                                             : ee::AnalogyCombo::A_MINUS_B;

    json report{{"model", args.model_path},
                {"seed", seed},
                {"tasks", json::object()}};
    report["tasks"]["relatedness"] = json::array();
    report["tasks"]["analogy"] = json::array();
    report["tasks"]["categorization"] = json::array();

    for (const auto& task : args.tasks) {
        const auto split = task.find('=');
        if (split == std::string::npos)
            throw std::runtime_error("--task expects <kind>=<file>, got \"" + task + "\"");
        const std::string kind = task.substr(0, split);
        const std::string file = task.substr(split + 1);

        if (kind == "relatedness") {
            const auto ds = ee::io::load_relatedness_tsv(file);
            const auto r = ee::relatedness_eval(vec, ds, corr, args.compose);
            report["tasks"]["relatedness"].push_back(
                {{"file", file},
                 {"correlation", args.correlation},
                 {"r", r.r},
                 {"evaluated", r.evaluated},
                 {"skipped", r.skipped}});
        } else if (kind == "analogy") {
            const auto ds = ee::io::load_analogy(file);
            const auto plain = ee::analogy_eval(vec, ds, false, combo);
            json entry{{"file", file},
                       {"combo", args.combo},
                       {"accuracy", plain.accuracy},
                       {"evaluated", plain.evaluated},
                       {"skipped", plain.skipped},
                       {"empty_candidate_items", plain.empty_candidate_items}};
            if (args.typed) {
                const auto typed = ee::analogy_eval(vec, ds, true, combo);
                entry["typed_accuracy"] = typed.accuracy;
                entry["typed_empty_candidate_items"] = typed.empty_candidate_items;
            }
            report["tasks"]["analogy"].push_back(std::move(entry));
        } else if (kind == "categorization") {
            const auto ds = ee::io::load_categorization_tsv(file);
            const auto c = ee::categorization_eval(vec, ds, method, seed, args.compose);
            report["tasks"]["categorization"].push_back({{"file", file},
                                                         {"method", args.cluster},
                                                         {"purity", c.purity},
                                                         {"evaluated", c.evaluated},
                                                         {"skipped", c.skipped}});
        } else {
            throw std::runtime_error("unknown task kind \"" + kind + "\"");
        }
    }

    const std::string text = report.dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(args.out);
        if (!out) throw std::runtime_error(args.out + ": cannot open for writing");
        out << text;
    }
    return 0;
}

// -------------------------------------------------------------- neighbors --

struct NeighborsArgs {
    std::string model_path;
    std::string query;
    std::string compose;
    std::string type;
    std::size_t k = 4;
};

int run_neighbors(const NeighborsArgs& args) {
    const auto vec = ee::io::load_embeddings(args.model_path);
    std::optional<ee::EntityType> type_filter;
    if (!args.type.empty()) {
        type_filter = ee::entity_type_from(args.type);
        if (!type_filter) throw std::runtime_error("unknown entity type \"" + args.type + "\"");
    }

    std::vector<ee::Neighbor> result;
    if (!args.compose.empty()) {
        std::vector<std::string> words;
        std::istringstream in(args.compose);
        std::string w;
        while (in >> w) words.push_back(w);
        std::size_t oov = 0;
        const auto query = ee::compose_multiword(vec, words, &oov);
        if (oov > 0) std::cerr << "warning: " << oov << " components out of vocabulary\n";
        result = ee::nearest_neighbors_of_vector(vec, query, args.k, type_filter);
    } else {
        if (args.query.empty()) throw std::runtime_error("no query given");
        result = ee::nearest_neighbors(vec, args.query, args.k, type_filter);
    }

    for (std::size_t rank = 0; rank < result.size(); ++rank) {
        const auto idx = vec.find(result[rank].key);
        std::cout << rank + 1 << '\t' << kind_letter(vec, *idx) << '\t' << result[rank].key << '\t'
                  << ee::io::format_double(result[rank].cosine) << "\n";
    }
    return 0;
}

// ------------------------------------------------------- export-projection --

struct ProjectionArgs {
    std::string model_path;
    std::string keys_path;
    std::string out = "projection.tsv";
};

int run_export_projection(const ProjectionArgs& args) {
    const auto vec = ee::io::load_embeddings(args.model_path);
    std::ifstream in(args.keys_path);
    if (!in) throw std::runtime_error(args.keys_path + ": cannot open keys file");

    std::vector<std::string> keys;
    std::vector<double> data;
    std::size_t duplicates = 0, missing = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
            ++duplicates;
            continue;
        }
        const auto idx = vec.find(key);
        if (!idx) {
            ++missing;
            continue;
        }
        keys.push_back(key);
        const auto row = vec.row(*idx);
        data.insert(data.end(), row.begin(), row.end());
    }
    if (duplicates > 0) std::cerr << "warning: " << duplicates << " duplicate keys ignored\n";
    if (missing > 0) std::cerr << "warning: " << missing << " keys out of vocabulary\n";
    if (keys.size() < 3) throw std::runtime_error("projection needs at least 3 usable keys");

    const auto proj = ee::project_top2(data, keys.size(), vec.dim());
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error(args.out + ": cannot open for writing");
    for (std::size_t i = 0; i < keys.size(); ++i)
        out << keys[i] << '\t' << ee::io::format_double(proj.coords[i][0]) << '\t'
            << ee::io::format_double(proj.coords[i][1]) << "\n";
    std::cout << "projected " << keys.size() << " keys\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint word and named-entity embeddings with intrinsic evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; command-line flags win");

    IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand("ingest", "parse a corpus, build vocabulary and cache");
    cmd_ingest->add_option("corpus", ingest.corpus_path, "corpus file")->required();
    cmd_ingest->add_option("--mode", ingest.mode, "raw or annotated")
        ->check(CLI::IsMember({"raw", "annotated"}));
    cmd_ingest->add_option("--min-count", ingest.min_count,
                           "frequency threshold (3 for skip-gram, 5 for GloVe)");
    cmd_ingest->add_option("--stoplist", ingest.stoplist_path, "stop-word file, one word per line");
    cmd_ingest->add_option("--pos-blocklist", ingest.pos_blocklist_path,
                           "blocked POS tags, one per line");
    cmd_ingest->add_option("--vocab", ingest.vocab_out, "vocabulary TSV output");
    cmd_ingest->add_option("--cache", ingest.cache_out, "corpus cache output");

    BuildGraphArgs graph;
    auto* cmd_graph = app.add_subcommand("build-graph", "build the cooccurrence graph");
    cmd_graph->add_option("--cache", graph.cache_path, "annotated corpus cache");
    cmd_graph->add_option("--vocab", graph.vocab_path, "vocabulary TSV");
    cmd_graph->add_option("--out", graph.out, "graph TSV output");
    cmd_graph->add_option("--entity-window", graph.entity_window,
                          "entity cooccurrence window in sentences");
    cmd_graph->add_option("--decay", graph.decay, "distance decay: inv (1/(1+d)) or exp")
        ->check(CLI::IsMember({"inv", "exp"}));
    cmd_graph->add_option("--edge-floor", graph.edge_floor, "prune edges below this weight");
    cmd_graph->add_option("--workers", graph.workers, "accumulation shards");

    TrainArgs train;
    auto* cmd_train = app.add_subcommand("train", "train an embedding model");
    cmd_train->add_option("--method", train.method, "w2v, glove, deepwalk_id, deepwalk_log, verse")
        ->check(CLI::IsMember({"w2v", "glove", "deepwalk_id", "deepwalk_log", "verse"}));
    cmd_train->add_option("--pipeline", train.pipeline, "raw or annotated")
        ->check(CLI::IsMember({"raw", "annotated"}));
    cmd_train->add_option("--cache", train.cache_path, "corpus cache (w2v, glove)");
    cmd_train->add_option("--vocab", train.vocab_path, "vocabulary TSV (w2v, glove)");
    cmd_train->add_option("--graph", train.graph_path, "graph TSV (deepwalk, verse)");
    cmd_train->add_option("--out", train.out, "embedding output file");
    cmd_train->add_option("--manifest", train.manifest_path, "manifest output path");
    cmd_train->add_option("--from-manifest", train.from_manifest, "replay a training manifest");
    cmd_train->add_option("--dump-walks", train.dump_walks, "write the walk corpus as text");
    cmd_train->add_option("--dump-matrix", train.dump_matrix, "write the cooccurrence matrix TSV");
    cmd_train->add_flag("--binary", train.binary, "write the binary embedding format");
    std::string preset;
    cmd_train->add_option("--preset", preset, "preset name; \"paper\" restores per-method defaults")
        ->check(CLI::IsMember({"paper"}));
    cmd_train->add_flag("--weighted-positives", train.weighted_positives,
                        "verse: draw positives by edge weight");
    cmd_train->add_option("--dim", train.dim, "embedding dimensions");
    cmd_train->add_option("--window", train.window, "context window in tokens");
    auto* opt_negatives = cmd_train->add_option("--negatives", train.negatives,
                                                "negative samples (8 raw / 16 annotated / 64 walks)");
    auto* opt_lr = cmd_train->add_option("--lr", train.learning_rate, "learning rate");
    cmd_train->add_option("--epochs", train.epochs, "training epochs");
    cmd_train->add_option("--subsample", train.subsample, "frequent-token subsampling threshold");
    cmd_train->add_option("--x-max", train.x_max, "glove weighting cut-off");
    cmd_train->add_option("--alpha", train.alpha, "glove weighting exponent");
    cmd_train->add_option("--walks", train.walks_per_node, "walks per node");
    cmd_train->add_option("--walk-length", train.walk_length, "nodes per walk");
    cmd_train->add_option("--samples", train.samples, "verse sampling rounds per node");
    cmd_train->add_option("--publish", train.publish, "glove output vectors: sum or center")
        ->check(CLI::IsMember({"sum", "center"}));
    cmd_train->add_option("--seed", train.seed, "rng seed (ENTITY_EMBED_SEED fallback)");
    cmd_train->add_option("--workers", train.workers, "training workers (1 = reproducible)");

    EvalArgs eval;
    auto* cmd_eval = app.add_subcommand("eval", "run intrinsic evaluation tasks");
    cmd_eval->add_option("--model", eval.model_path, "embedding file")->required();
    cmd_eval->add_option("--task", eval.tasks,
                         "task spec <kind>=<file>; kinds: relatedness, analogy, categorization");
    cmd_eval->add_flag("--typed", eval.typed, "also report type-restricted analogy accuracy");
    cmd_eval->add_flag("--compose-multiword", eval.compose,
                       "resolve multi-word keys as the mean of their words");
    cmd_eval->add_option("--correlation", eval.correlation, "pearson or spearman")
        ->check(CLI::IsMember({"pearson", "spearman"}));
    cmd_eval->add_option("--cluster", eval.cluster, "kmeans or agglomerative")
        ->check(CLI::IsMember({"kmeans", "agglomerative"}));
    cmd_eval->add_option("--combo", eval.combo, "analogy offset direction")
        ->check(CLI::IsMember({"a-b+x", "b-a+x"}));
    cmd_eval->add_option("--out", eval.out, "report JSON path (default: stdout)");
    cmd_eval->add_option("--seed", eval.seed, "clustering seed (ENTITY_EMBED_SEED fallback)");

    NeighborsArgs neighbors;
    auto* cmd_neighbors = app.add_subcommand("neighbors", "print nearest neighbors of a key");
    cmd_neighbors->add_option("--model", neighbors.model_path, "embedding file")->required();
    cmd_neighbors->add_option("query", neighbors.query, "vocabulary key");
    cmd_neighbors->add_option("--compose", neighbors.compose,
                              "space-separated words composed by averaging");
    cmd_neighbors->add_option("-k,--top", neighbors.k, "neighbors to print");
    cmd_neighbors->add_option("--type", neighbors.type, "restrict to PER, LOC, ORG or DATE");

    ProjectionArgs projection;
    auto* cmd_projection =
        app.add_subcommand("export-projection", "write 2-D principal-component coordinates");
    cmd_projection->add_option("--model", projection.model_path, "embedding file")->required();
    cmd_projection->add_option("--keys", projection.keys_path, "keys file, one per line")
        ->required();
    cmd_projection->add_option("--out", projection.out, "projection TSV output");

    try {
        app.parse(argc, argv);
        train.user_negatives = opt_negatives->count() > 0;
        train.user_lr = opt_lr->count() > 0;
        train.preset_paper = preset == "paper";
        if (cmd_ingest->parsed()) return run_ingest(ingest);
        if (cmd_graph->parsed()) return run_build_graph(graph);
        if (cmd_train->parsed()) return run_train(train);
        if (cmd_eval->parsed()) return run_eval(eval);
        if (cmd_neighbors->parsed()) return run_neighbors(neighbors);
        if (cmd_projection->parsed()) return run_export_projection(projection);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
