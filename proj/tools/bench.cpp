// Serial vs OpenMP timing for the three data-parallel kernels: tf-idf
// corpus transformation, hogwild Doc2Vec training, and random-forest
// construction. The serial path is the reference implementation; this
// binary reports speedups and checks that parallel output agrees where
// the contract demands it.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "conseq/classifiers.hpp"
#include "conseq/doc2vec.hpp"
#include "conseq/random.hpp"
#include "conseq/tfidf.hpp"

using namespace conseq;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<TokenizedDocument> synthetic_corpus(std::size_t n_docs, std::size_t doc_len,
                                                std::size_t vocab, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TokenizedDocument> docs(n_docs);
    for (auto& doc : docs) {
        doc.tokens.reserve(doc_len);
        for (std::size_t i = 0; i < doc_len; ++i) {
            doc.tokens.push_back("w" + std::to_string(rng.index(vocab)));
        }
    }
    return docs;
}

void report(const std::string& name, double serial, double parallel, const std::string& note) {
    std::cout << std::left << std::setw(22) << name << std::right << std::fixed
              << std::setprecision(3) << std::setw(9) << serial << " s" << std::setw(9)
              << parallel << " s" << std::setw(8) << std::setprecision(2) << serial / parallel
              << "x  " << note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    int threads = 0;  // 0 = hardware default
    std::size_t n_docs = 2000;
    std::size_t doc_len = 80;
    app.add_option("--threads", threads, "worker threads (0 = hardware default)");
    app.add_option("--docs", n_docs, "synthetic corpus size");
    app.add_option("--doc-len", doc_len, "tokens per document");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    const int effective = threads > 0 ? threads : omp_get_max_threads();
#else
    const int effective = 1;
    std::cout << "(built without OpenMP; parallel paths fall back to serial)\n";
#endif
    std::cout << "threads: " << effective << ", corpus: " << n_docs << " docs x " << doc_len
              << " tokens\n\n";
    std::cout << std::left << std::setw(22) << "kernel" << std::right << std::setw(11)
              << "serial" << std::setw(11) << "parallel" << std::setw(9) << "speedup" << "\n";

    auto corpus = synthetic_corpus(n_docs, doc_len, 5000, 7);

    {
        auto model = fit_tfidf(corpus, TfidfConfig{.min_df = 1});
        auto t0 = std::chrono::steady_clock::now();
        auto serial_rows = transform_corpus(model, corpus, 1);
        double t_serial = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto parallel_rows = transform_corpus(model, corpus, threads == 1 ? 0 : threads);
        double t_parallel = seconds_since(t0);
        bool equal = serial_rows == parallel_rows;
        report("tfidf transform", t_serial, t_parallel,
               equal ? "rows identical" : "MISMATCH");
    }

    {
        std::vector<TaggedDocument> tagged(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            tagged[i] = {"doc" + std::to_string(i), corpus[i]};
        }
        Doc2VecConfig cfg;
        cfg.dim = 64;
        cfg.epochs = 3;
        cfg.seed = 11;
        cfg.threads = 1;
        auto t0 = std::chrono::steady_clock::now();
        auto serial_model = train_doc2vec(tagged, cfg);
        double t_serial = seconds_since(t0);
        cfg.threads = threads == 1 ? 0 : threads;
        t0 = std::chrono::steady_clock::now();
        auto hogwild_model = train_doc2vec(tagged, cfg);
        double t_parallel = seconds_since(t0);
        std::ostringstream note;
        note << "final loss " << std::setprecision(4) << serial_model.epoch_losses.back()
             << " vs " << hogwild_model.epoch_losses.back() << " (hogwild)";
        report("doc2vec train", t_serial, t_parallel, note.str());
    }

    {
        const std::size_t rows = 1500, cols = 24;
        Rng rng(3);
        std::vector<double> data(rows * cols);
        std::vector<int> labels(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            labels[i] = static_cast<int>(i % 3);
            for (std::size_t c = 0; c < cols; ++c) {
                data[i * cols + c] = rng.uniform() + (c % 3 == static_cast<std::size_t>(labels[i])
                                                          ? 1.0
                                                          : 0.0);
            }
        }
        auto X = FeatureMatrix::from_dense(rows, cols, std::move(data));
        RandomForestConfig cfg;
        cfg.n_trees = 60;
        cfg.seed = 5;
        cfg.threads = 1;
        auto t0 = std::chrono::steady_clock::now();
        auto serial_forest = train_random_forest(X, labels, cfg);
        double t_serial = seconds_since(t0);
        cfg.threads = threads == 1 ? 0 : threads;
        t0 = std::chrono::steady_clock::now();
        auto parallel_forest = train_random_forest(X, labels, cfg);
        double t_parallel = seconds_since(t0);
        bool equal = serial_forest == parallel_forest;
        report("random forest", t_serial, t_parallel,
               equal ? "forests identical" : "MISMATCH");
    }
    return 0;
}
