#include "conseq/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace conseq {

double SparseVector::norm() const {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

TfidfModel fit_tfidf(const std::vector<TokenizedDocument>& corpus, const TfidfConfig& config) {
    if (corpus.empty()) throw std::invalid_argument("fit_tfidf: empty corpus");
    if (config.min_df < 1) throw std::invalid_argument("fit_tfidf: min_df must be >= 1");
    if (config.ngram_min < 1 || config.ngram_min > config.ngram_max) {
        throw std::invalid_argument("fit_tfidf: bad ngram range");
    }
    if (!(config.max_df_ratio > 0.0 && config.max_df_ratio <= 1.0)) {
        throw std::invalid_argument("fit_tfidf: max_df_ratio must be in (0,1]");
    }

    const auto n_docs = corpus.size();
    // std::map keeps terms lexicographically sorted, which is exactly the
    // column order the model promises.
    std::map<std::string, int> df;
    std::vector<std::string> doc_terms;
    for (const auto& doc : corpus) {
        doc_terms = ngrams(doc, config.ngram_min, config.ngram_max);
        std::sort(doc_terms.begin(), doc_terms.end());
        doc_terms.erase(std::unique(doc_terms.begin(), doc_terms.end()), doc_terms.end());
        for (auto& term : doc_terms) ++df[term];
    }

    const int max_df =
        static_cast<int>(std::ceil(config.max_df_ratio * static_cast<double>(n_docs)));
    TfidfModel model;
    model.config = config;
    model.vocabulary.n_docs = n_docs;
    for (const auto& [term, count] : df) {
        if (count < config.min_df || count > max_df) continue;
        model.vocabulary.term_index.emplace(term, model.vocabulary.terms.size());
        model.vocabulary.terms.push_back(term);
        model.vocabulary.doc_freqs.push_back(count);
    }
    if (model.vocabulary.terms.empty()) {
        throw std::invalid_argument("fit_tfidf: vocabulary empty after df filtering");
    }
    model.idf.reserve(model.vocabulary.size());
    const double n = static_cast<double>(n_docs);
    for (int dft : model.vocabulary.doc_freqs) {
        double idf = config.smooth_idf ? std::log((1.0 + n) / (1.0 + dft)) + 1.0
                                       : std::log(n / dft);
        model.idf.push_back(idf);
    }
    return model;
}

SparseVector TfidfModel::transform(const TokenizedDocument& doc) const {
    std::map<std::size_t, int> counts;  // column -> in-document frequency
    std::int64_t total = 0;
    for (const auto& term : ngrams(doc, config.ngram_min, config.ngram_max)) {
        auto it = vocabulary.term_index.find(term);
        if (it == vocabulary.term_index.end()) continue;
        ++counts[it->second];
        ++total;
    }
    SparseVector vec;
    if (total == 0) return vec;
    vec.indices.reserve(counts.size());
    vec.values.reserve(counts.size());
    for (const auto& [col, count] : counts) {
        vec.indices.push_back(col);
        vec.values.push_back(static_cast<double>(count) / static_cast<double>(total) * idf[col]);
    }
    if (config.l2_normalize) {
        double norm = vec.norm();
        if (norm > 0.0) {
            for (double& v : vec.values) v /= norm;
        }
    }
    return vec;
}

std::vector<SparseVector> transform_corpus(const TfidfModel& model,
                                           const std::vector<TokenizedDocument>& corpus,
                                           int threads) {
    std::vector<SparseVector> rows(corpus.size());
    if (threads == 1) {
        for (std::size_t i = 0; i < corpus.size(); ++i) rows[i] = model.transform(corpus[i]);
        return rows;
    }
#ifdef _OPENMP
    const auto n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (std::int64_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = model.transform(corpus[static_cast<std::size_t>(i)]);
    }
#else
    for (std::size_t i = 0; i < corpus.size(); ++i) rows[i] = model.transform(corpus[i]);
#endif
    return rows;
}

}  // namespace conseq
