#pragma once

// Synthetic labeled text dataset over the seven kept consequence clusters,
// with strongly themed per-class vocabulary so classifiers have signal.

#include <string>
#include <vector>

#include "conseq/corpus.hpp"
#include "conseq/pipeline.hpp"
#include "conseq/random.hpp"

namespace testdata {

inline conseq::Dataset synthetic_text_dataset(int per_class, std::uint64_t seed) {
    using namespace conseq;
    struct Theme {
        int label;
        std::vector<int> raw_ids;
        std::vector<std::string> words;
    };
    const std::vector<Theme> themes = {
        {3, {3}, {"password", "credential", "account", "login", "stolen", "breach",
                  "unauthorized", "identity", "session", "token"}},
        {4, {4}, {"modified", "hidden", "tampered", "files", "ransom", "altered",
                  "backdoor", "payload", "persistence", "registry"}},
        {5, {5}, {"website", "fake", "spoofed", "page", "browser", "redirect",
                  "phishing", "clone", "form", "lookalike"}},
        {6, {6}, {"intercepted", "traffic", "rerouted", "database", "network",
                  "eavesdrop", "proxy", "dns", "record", "capture"}},
        {7, {7}, {"crash", "slow", "memory", "flood", "overload", "freeze",
                  "exhausted", "denial", "cpu", "reboot"}},
        {8, {6, 5, 3}, {"intercepted", "website", "password", "combined", "spoofed",
                        "credential", "rerouted", "fake", "stolen", "capture"}},
        {10, {2, 7}, {"disrupted", "crash", "outage", "flood", "unavailable", "slow",
                      "connection", "blocked", "downtime", "saturated"}},
    };
    const std::vector<std::string> fillers = {"attacker", "victim", "computer", "system",
                                              "machine", "service"};
    Dataset dataset;
    dataset.taxonomy = default_taxonomy();
    Rng rng(seed);
    for (const auto& theme : themes) {
        for (int i = 0; i < per_class; ++i) {
            AttackRecord rec;
            rec.id = "syn-" + std::to_string(theme.label) + "-" + std::to_string(i);
            rec.name = "synthetic attack " + rec.id;
            const int n_descriptions = 1 + static_cast<int>(rng.index(2));
            for (int d = 0; d < n_descriptions; ++d) {
                std::string text = "The";
                const std::size_t len = 12 + rng.index(8);
                for (std::size_t w = 0; w < len; ++w) {
                    text += ' ';
                    text += rng.uniform() < 0.75 ? theme.words[rng.index(theme.words.size())]
                                                 : fillers[rng.index(fillers.size())];
                }
                text += '.';
                rec.descriptions.push_back(text);
            }
            for (int raw : theme.raw_ids) {
                rec.consequences.push_back("The cyber-attacker caused consequence " +
                                           std::to_string(raw) + ".");
                rec.raw_cluster_ids.push_back(raw);
            }
            rec.cluster_label = theme.label;
            dataset.records.push_back(std::move(rec));
        }
    }
    return dataset;
}

/// Fast pipeline settings for tests: small embeddings, short training.
inline conseq::PipelineConfig fast_config(std::uint64_t seed) {
    conseq::PipelineConfig cfg;
    cfg.doc2vec.dim = 32;
    cfg.doc2vec.epochs = 15;
    cfg.doc2vec.infer_epochs = 20;
    cfg.linear_svc.epochs = 250;
    cfg.logistic_regression.epochs = 250;
    cfg.random_forest.n_trees = 40;
    cfg.mlp.hidden_layers = {24};
    cfg.mlp.max_iter = 120;
    cfg.apply_seed(seed);
    return cfg;
}

}  // namespace testdata
