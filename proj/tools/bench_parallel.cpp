// Benchmark of the OpenMP training kernels against their serial reference
// paths on synthetic data. The serial path (workers = 1) is the deterministic
// implementation the tests pin down; this tool reports what the lock-free
// parallel path buys on top of it.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "entity_embed/cooc.hpp"
#include "entity_embed/glove.hpp"
#include "entity_embed/graph_embed.hpp"
#include "entity_embed/rng.hpp"
#include "entity_embed/sgns.hpp"

namespace ee = entity_embed;

namespace {

double seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ee::IndexedCorpus synthetic_corpus(int sentences, int sentence_len, ee::Index vocab,
                                   std::uint64_t seed) {
    ee::Rng rng(seed);
    ee::IndexedDocument doc;
    doc.id = "bench";
    for (int s = 0; s < sentences; ++s) {
        std::vector<ee::Index> sent(static_cast<std::size_t>(sentence_len));
        for (auto& t : sent)
            t = static_cast<ee::Index>(rng.bounded(static_cast<std::uint64_t>(vocab)));
        doc.sentences.push_back(std::move(sent));
    }
    ee::IndexedCorpus corpus;
    corpus.push_back(std::move(doc));
    return corpus;
}

struct Row {
    std::string kernel;
    double serial_s;
    double parallel_s;
};

void print_rows(const std::vector<Row>& rows, int threads) {
    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");
    for (const auto& r : rows)
        std::printf("%-22s %12.3f %12.3f %8.2fx\n", r.kernel.c_str(), r.serial_s, r.parallel_s,
                    r.serial_s / r.parallel_s);
    std::printf("(parallel = %d threads)\n", threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    int sentences = 4000;
    int sentence_len = 16;
    int vocab = 2000;
    int dim = 64;
    int threads = 0;
    app.add_option("--sentences", sentences, "synthetic corpus sentences");
    app.add_option("--sentence-len", sentence_len, "tokens per sentence");
    app.add_option("--vocab", vocab, "vocabulary size");
    app.add_option("--dim", dim, "embedding dimensions");
    app.add_option("--threads", threads, "parallel worker count (default: all cores)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
    std::printf("built without OpenMP; parallel timings equal serial\n");
#endif

    const auto corpus = synthetic_corpus(sentences, sentence_len, vocab, 7);
    std::vector<Row> rows;

    {
        ee::SgnsConfig cfg;
        cfg.dim = dim;
        cfg.window = 5;
        cfg.negatives = 5;
        cfg.epochs = 1;
        cfg.seed = 3;
        cfg.workers = 1;
        auto start = std::chrono::steady_clock::now();
        ee::train_sgns(corpus, static_cast<std::size_t>(vocab), cfg);
        const double serial = seconds(start);
        cfg.workers = threads;
        start = std::chrono::steady_clock::now();
        ee::train_sgns(corpus, static_cast<std::size_t>(vocab), cfg);
        rows.push_back({"sgns epoch", serial, seconds(start)});
    }

    {
        auto start = std::chrono::steady_clock::now();
        const auto x1 = ee::accumulate_glove_counts(corpus, 10, 1);
        const double serial = seconds(start);
        start = std::chrono::steady_clock::now();
        const auto x2 = ee::accumulate_glove_counts(corpus, 10, threads);
        rows.push_back({"cooc accumulation", serial, seconds(start)});
        if (!(x1 == x2)) std::fprintf(stderr, "BUG: sharded accumulation diverged\n");

        ee::GloveConfig cfg;
        cfg.dim = dim;
        cfg.epochs = 3;
        cfg.seed = 5;
        cfg.workers = 1;
        start = std::chrono::steady_clock::now();
        ee::train_glove(x1, static_cast<std::size_t>(vocab), cfg);
        const double glove_serial = seconds(start);
        cfg.workers = threads;
        start = std::chrono::steady_clock::now();
        ee::train_glove(x1, static_cast<std::size_t>(vocab), cfg);
        rows.push_back({"glove epochs (3)", glove_serial, seconds(start)});

        const auto graph =
            ee::CoocGraph::from_matrix(static_cast<std::size_t>(vocab), x1);

        ee::WalkConfig wcfg;
        wcfg.walks_per_node = 10;
        wcfg.walk_length = 4;
        wcfg.seed = 9;
        wcfg.workers = 1;
        start = std::chrono::steady_clock::now();
        const auto w1 = ee::generate_walk_corpus(graph, wcfg);
        const double walks_serial = seconds(start);
        wcfg.workers = threads;
        start = std::chrono::steady_clock::now();
        const auto w2 = ee::generate_walk_corpus(graph, wcfg);
        rows.push_back({"walk generation", walks_serial, seconds(start)});
        if (w1[0].sentences != w2[0].sentences)
            std::fprintf(stderr, "BUG: parallel walk corpus diverged\n");

        ee::VerseConfig vcfg;
        vcfg.dim = dim;
        vcfg.samples = 50;
        vcfg.seed = 11;
        vcfg.workers = 1;
        start = std::chrono::steady_clock::now();
        ee::verse_train(graph, vcfg);
        const double verse_serial = seconds(start);
        vcfg.workers = threads;
        start = std::chrono::steady_clock::now();
        ee::verse_train(graph, vcfg);
        rows.push_back({"verse rounds", verse_serial, seconds(start)});
    }

    print_rows(rows, threads);
    return 0;
}
