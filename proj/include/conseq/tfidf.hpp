#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "conseq/textprep.hpp"

namespace conseq {

struct TfidfConfig {
    int min_df = 2;
    double max_df_ratio = 0.98;
    int ngram_min = 1;
    int ngram_max = 2;
    bool smooth_idf = true;
    bool l2_normalize = true;

    bool operator==(const TfidfConfig&) const = default;
};

/// Sparse row: strictly increasing column indices with matching values.
struct SparseVector {
    std::vector<std::size_t> indices;
    std::vector<double> values;

    double norm() const;
    bool operator==(const SparseVector&) const = default;
};

/// Fitted vocabulary. Columns are assigned in lexicographic term order, so
/// terms[i] owns column i and doc_freqs[i] is its document frequency.
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<int> doc_freqs;
    std::size_t n_docs = 0;
    std::unordered_map<std::string, std::size_t> term_index;

    std::size_t size() const { return terms.size(); }
    bool operator==(const Vocabulary& other) const {
        return terms == other.terms && doc_freqs == other.doc_freqs && n_docs == other.n_docs;
    }
};

struct TfidfModel {
    Vocabulary vocabulary;
    std::vector<double> idf;  // aligned with vocabulary.terms
    TfidfConfig config;

    /// tf(t,d) * idf(t) over the document's n-gram stream, where tf divides
    /// by the count of in-vocabulary occurrences only; out-of-vocabulary
    /// terms are ignored. L2-normalized last when configured.
    SparseVector transform(const TokenizedDocument& doc) const;

    bool operator==(const TfidfModel&) const = default;
};

/// Builds the vocabulary over the corpus n-gram streams, keeping terms with
/// min_df <= df <= ceil(max_df_ratio * n_docs), and computes idf:
/// ln((1+N)/(1+df)) + 1 when smoothing, ln(N/df) otherwise.
TfidfModel fit_tfidf(const std::vector<TokenizedDocument>& corpus,
                     const TfidfConfig& config = TfidfConfig());

/// Elementwise transform, order preserved. threads == 1 runs the serial
/// reference loop; anything else fans out with OpenMP (0 = hardware default).
/// Results are identical either way.
std::vector<SparseVector> transform_corpus(const TfidfModel& model,
                                           const std::vector<TokenizedDocument>& corpus,
                                           int threads = 1);

}  // namespace conseq
