#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "conseq/textprep.hpp"

namespace conseq {

enum class Doc2VecMode { pv_dbow, pv_dm };

struct Doc2VecConfig {
    int dim = 300;
    double learning_rate = 0.065;
    double min_learning_rate = 0.0001;
    int epochs = 50;
    Doc2VecMode mode = Doc2VecMode::pv_dbow;
    int window = 5;  // pv_dm only
    int negative_samples = 5;
    int min_word_count = 1;
    std::uint64_t seed = 0;
    int infer_epochs = 50;
    /// 1 = deterministic serial reference. Anything else trains documents
    /// concurrently with unsynchronized (hogwild) weight updates, which is
    /// faster but not bit-reproducible. 0 = hardware default.
    int threads = 1;

    bool operator==(const Doc2VecConfig&) const = default;
};

struct TaggedDocument {
    std::string tag;
    TokenizedDocument tokens;
};

/// Training vocabulary: words sorted lexicographically, so row assignment
/// is deterministic; counts are exact corpus unigram counts.
struct Doc2VecVocab {
    std::vector<std::string> words;
    std::vector<std::int64_t> counts;
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return words.size(); }
    bool operator==(const Doc2VecVocab& other) const {
        return words == other.words && counts == other.counts;
    }
};

struct Doc2VecModel {
    Doc2VecConfig config;
    Doc2VecVocab vocab;
    std::vector<double> word_vectors;  // |vocab| x dim, context/output weights
    std::vector<double> doc_vectors;   // n_docs x dim, paragraph vectors
    std::vector<std::string> doc_tags;
    std::vector<double> noise_distribution;  // unigram^(3/4), normalized
    std::vector<double> epoch_losses;        // mean negative-sampling loss per epoch

    std::size_t n_docs() const { return doc_tags.size(); }

    /// Trains a fresh paragraph vector against frozen word/context weights
    /// for infer_epochs passes. A document with no in-vocabulary words
    /// yields the zero vector and sets *low_signal when provided.
    std::vector<double> infer_vector(const TokenizedDocument& doc, int infer_epochs,
                                     std::uint64_t seed, bool* low_signal = nullptr) const;

    /// Top-k training documents by cosine similarity to the tagged one,
    /// excluding the query itself; ties broken by training order.
    std::vector<std::pair<std::string, double>> most_similar(const std::string& tag,
                                                             std::size_t k) const;

    bool operator==(const Doc2VecModel&) const = default;
};

/// Words with corpus count >= min_word_count. Throws when nothing survives.
Doc2VecVocab build_vocab(const std::vector<TaggedDocument>& docs, int min_word_count);

/// Trains paragraph vectors with negative sampling. PV-DBOW scores each
/// document word against its paragraph vector; PV-DM predicts the center
/// word from the average of the paragraph vector and the window's word
/// vectors. The learning rate decays linearly to min_learning_rate over
/// all scheduled updates. Throws on non-finite loss (divergence).
Doc2VecModel train_doc2vec(const std::vector<TaggedDocument>& docs,
                           const Doc2VecConfig& config = Doc2VecConfig());

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace conseq
