#include "conseq/doc2vec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "conseq/random.hpp"

namespace conseq {

namespace {

constexpr double kNoiseExponent = 0.75;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -ln(sigmoid(x)), computed without overflow.
double neg_log_sigmoid(double x) {
    return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

std::vector<double> noise_cdf(const std::vector<double>& probabilities) {
    std::vector<double> cdf(probabilities.size());
    double running = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        running += probabilities[i];
        cdf[i] = running;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

std::size_t sample_noise(const std::vector<double>& cdf, Rng& rng) {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

void fill_uniform(std::vector<double>& m, double half_range, Rng& rng) {
    for (double& v : m) v = rng.uniform(-half_range, half_range);
}

// Shared state of one training run.
struct Trainer {
    const Doc2VecConfig& cfg;
    Doc2VecModel& model;
    const std::vector<std::vector<std::size_t>>& doc_words;  // in-vocab rows per doc
    std::vector<double> cdf;
    std::int64_t positions_per_epoch = 0;
    std::vector<std::int64_t> positions_before;  // prefix sums over docs

    double alpha_at(std::int64_t update_index) const {
        const double total =
            static_cast<double>(cfg.epochs) * static_cast<double>(positions_per_epoch);
        double progress = total > 0.0 ? static_cast<double>(update_index) / total : 0.0;
        double alpha = cfg.learning_rate - (cfg.learning_rate - cfg.min_learning_rate) * progress;
        return std::max(alpha, cfg.min_learning_rate);
    }

    // One negative-sampling step of `center` against `context`, dim-wide.
    // Accumulates the context gradient into `context_grad`; output rows are
    // updated in place unless frozen. Returns the step's loss.
    double ns_step(std::size_t center, const double* context, double* context_grad, double alpha,
                   Rng& rng, bool freeze_outputs) {
        const int dim = cfg.dim;
        double* wv = model.word_vectors.data();
        double loss = 0.0;
        for (int k = 0; k <= cfg.negative_samples; ++k) {
            std::size_t target;
            double label;
            if (k == 0) {
                target = center;
                label = 1.0;
            } else {
                target = sample_noise(cdf, rng);
                if (target == center) continue;
                label = 0.0;
            }
            double* row = wv + target * dim;
            double f = 0.0;
            for (int c = 0; c < dim; ++c) f += context[c] * row[c];
            loss += label > 0.5 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
            double g = (label - sigmoid(f)) * alpha;
            for (int c = 0; c < dim; ++c) context_grad[c] += g * row[c];
            if (!freeze_outputs) {
                for (int c = 0; c < dim; ++c) row[c] += g * context[c];
            }
        }
        return loss;
    }

    double train_doc_dbow(std::size_t d, int epoch) {
        const int dim = cfg.dim;
        double* dv = model.doc_vectors.data() + d * dim;
        const auto& words = doc_words[d];
        Rng rng(mix_seed(mix_seed(cfg.seed, 0xD0CULL + static_cast<std::uint64_t>(epoch)), d));
        std::vector<double> grad(dim);
        double loss = 0.0;
        std::int64_t update =
            static_cast<std::int64_t>(epoch) * positions_per_epoch + positions_before[d];
        for (std::size_t j = 0; j < words.size(); ++j, ++update) {
            double alpha = alpha_at(update);
            std::fill(grad.begin(), grad.end(), 0.0);
            loss += ns_step(words[j], dv, grad.data(), alpha, rng, false);
            for (int c = 0; c < dim; ++c) dv[c] += grad[c];
        }
        return loss;
    }

    double train_doc_dm(std::size_t d, int epoch) {
        const int dim = cfg.dim;
        double* dv = model.doc_vectors.data() + d * dim;
        double* wv = model.word_vectors.data();
        const auto& words = doc_words[d];
        Rng rng(mix_seed(mix_seed(cfg.seed, 0xD0CULL + static_cast<std::uint64_t>(epoch)), d));
        std::vector<double> context(dim), grad(dim);
        double loss = 0.0;
        std::int64_t update =
            static_cast<std::int64_t>(epoch) * positions_per_epoch + positions_before[d];
        const auto n = static_cast<std::ptrdiff_t>(words.size());
        for (std::ptrdiff_t j = 0; j < n; ++j, ++update) {
            double alpha = alpha_at(update);
            auto lo = std::max<std::ptrdiff_t>(0, j - cfg.window);
            auto hi = std::min<std::ptrdiff_t>(n, j + cfg.window + 1);
            // average of the paragraph vector and the window's word vectors
            std::copy(dv, dv + dim, context.begin());
            int cw = 1;
            for (auto a = lo; a < hi; ++a) {
                if (a == j) continue;
                const double* row = wv + words[a] * dim;
                for (int c = 0; c < dim; ++c) context[c] += row[c];
                ++cw;
            }
            for (int c = 0; c < dim; ++c) context[c] /= cw;
            std::fill(grad.begin(), grad.end(), 0.0);
            loss += ns_step(words[j], context.data(), grad.data(), alpha, rng, false);
            for (int c = 0; c < dim; ++c) dv[c] += grad[c];
            for (auto a = lo; a < hi; ++a) {
                if (a == j) continue;
                double* row = wv + words[a] * dim;
                for (int c = 0; c < dim; ++c) row[c] += grad[c];
            }
        }
        return loss;
    }

    double train_doc(std::size_t d, int epoch) {
        return cfg.mode == Doc2VecMode::pv_dbow ? train_doc_dbow(d, epoch)
                                                : train_doc_dm(d, epoch);
    }
};

void validate(const Doc2VecConfig& cfg) {
    if (cfg.dim < 1) throw std::invalid_argument("doc2vec: dim must be >= 1");
    if (!(cfg.min_learning_rate > 0.0 && cfg.min_learning_rate <= cfg.learning_rate)) {
        throw std::invalid_argument("doc2vec: require 0 < min_learning_rate <= learning_rate");
    }
    if (cfg.epochs < 1) throw std::invalid_argument("doc2vec: epochs must be >= 1");
    if (cfg.negative_samples < 1) {
        throw std::invalid_argument("doc2vec: negative_samples must be >= 1");
    }
    if (cfg.mode == Doc2VecMode::pv_dm && cfg.window < 1) {
        throw std::invalid_argument("doc2vec: window must be >= 1");
    }
}

}  // namespace

Doc2VecVocab build_vocab(const std::vector<TaggedDocument>& docs, int min_word_count) {
    if (docs.empty()) throw std::invalid_argument("build_vocab: no documents");
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& doc : docs) {
        for (const auto& tok : doc.tokens.tokens) ++counts[tok];
    }
    Doc2VecVocab vocab;
    for (const auto& [word, count] : counts) {
        if (count >= min_word_count) vocab.words.push_back(word);
    }
    if (vocab.words.empty()) {
        throw std::invalid_argument("build_vocab: vocabulary empty after min_word_count filter");
    }
    std::sort(vocab.words.begin(), vocab.words.end());
    vocab.counts.reserve(vocab.words.size());
    for (std::size_t i = 0; i < vocab.words.size(); ++i) {
        vocab.counts.push_back(counts.at(vocab.words[i]));
        vocab.index.emplace(vocab.words[i], i);
    }
    return vocab;
}

Doc2VecModel train_doc2vec(const std::vector<TaggedDocument>& docs, const Doc2VecConfig& config) {
    validate(config);
    Doc2VecModel model;
    model.config = config;
    model.vocab = build_vocab(docs, config.min_word_count);

    std::unordered_map<std::string, std::size_t> tag_seen;
    for (const auto& doc : docs) {
        if (!tag_seen.emplace(doc.tag, tag_seen.size()).second) {
            throw std::invalid_argument("train_doc2vec: duplicate tag '" + doc.tag + "'");
        }
        model.doc_tags.push_back(doc.tag);
    }

    model.noise_distribution.resize(model.vocab.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        model.noise_distribution[i] =
            std::pow(static_cast<double>(model.vocab.counts[i]), kNoiseExponent);
        mass += model.noise_distribution[i];
    }
    for (double& p : model.noise_distribution) p /= mass;

    const int dim = config.dim;
    model.word_vectors.resize(model.vocab.size() * dim);
    model.doc_vectors.resize(docs.size() * dim);
    {
        Rng words_rng(mix_seed(config.seed, 0x57EEDULL));
        Rng docs_rng(mix_seed(config.seed, 0xD1CEULL));
        fill_uniform(model.word_vectors, 0.5 / dim, words_rng);
        fill_uniform(model.doc_vectors, 0.5 / dim, docs_rng);
    }

    std::vector<std::vector<std::size_t>> doc_words(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& tok : docs[d].tokens.tokens) {
            auto it = model.vocab.index.find(tok);
            if (it != model.vocab.index.end()) doc_words[d].push_back(it->second);
        }
    }

    Trainer trainer{config, model, doc_words, noise_cdf(model.noise_distribution), 0, {}};
    trainer.positions_before.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        trainer.positions_before[d] = trainer.positions_per_epoch;
        trainer.positions_per_epoch += static_cast<std::int64_t>(doc_words[d].size());
    }
    if (trainer.positions_per_epoch == 0) {
        throw std::invalid_argument("train_doc2vec: corpus has no in-vocabulary words");
    }

    const auto n_docs = static_cast<std::int64_t>(docs.size());
    model.epoch_losses.reserve(config.epochs);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double loss_sum = 0.0;
        if (config.threads == 1) {
            for (std::int64_t d = 0; d < n_docs; ++d) {
                loss_sum += trainer.train_doc(static_cast<std::size_t>(d), epoch);
            }
        } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : loss_sum) \
    num_threads(config.threads > 0 ? config.threads : omp_get_max_threads())
            for (std::int64_t d = 0; d < n_docs; ++d) {
                loss_sum += trainer.train_doc(static_cast<std::size_t>(d), epoch);
            }
#else
            for (std::int64_t d = 0; d < n_docs; ++d) {
                loss_sum += trainer.train_doc(static_cast<std::size_t>(d), epoch);
            }
#endif
        }
        double mean_loss = loss_sum / static_cast<double>(trainer.positions_per_epoch);
        if (!std::isfinite(mean_loss)) {
            throw std::runtime_error("train_doc2vec: non-finite loss at epoch " +
                                     std::to_string(epoch));
        }
        model.epoch_losses.push_back(mean_loss);
    }
    return model;
}

std::vector<double> Doc2VecModel::infer_vector(const TokenizedDocument& doc, int infer_epochs,
                                               std::uint64_t seed, bool* low_signal) const {
    if (low_signal) *low_signal = false;
    if (infer_epochs < 1) throw std::invalid_argument("infer_vector: infer_epochs must be >= 1");
    const int dim = config.dim;
    std::vector<std::size_t> words;
    for (const auto& tok : doc.tokens) {
        auto it = vocab.index.find(tok);
        if (it != vocab.index.end()) words.push_back(it->second);
    }
    if (words.empty()) {
        if (low_signal) *low_signal = true;
        return std::vector<double>(dim, 0.0);
    }

    std::vector<double> vec(dim);
    Rng init_rng(mix_seed(seed, 0x1FE2ULL));
    fill_uniform(vec, 0.5 / dim, init_rng);

    const auto cdf = noise_cdf(noise_distribution);
    const double total =
        static_cast<double>(infer_epochs) * static_cast<double>(words.size());
    const double* wv = word_vectors.data();
    std::vector<double> grad(dim);
    std::int64_t update = 0;
    for (int epoch = 0; epoch < infer_epochs; ++epoch) {
        Rng rng(mix_seed(mix_seed(seed, 0x1FE3ULL), static_cast<std::uint64_t>(epoch)));
        for (std::size_t j = 0; j < words.size(); ++j, ++update) {
            double progress = static_cast<double>(update) / total;
            double alpha = config.learning_rate -
                           (config.learning_rate - config.min_learning_rate) * progress;
            alpha = std::max(alpha, config.min_learning_rate);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (int k = 0; k <= config.negative_samples; ++k) {
                std::size_t target;
                double label;
                if (k == 0) {
                    target = words[j];
                    label = 1.0;
                } else {
                    target = sample_noise(cdf, rng);
                    if (target == words[j]) continue;
                    label = 0.0;
                }
                const double* row = wv + target * dim;
                double f = 0.0;
                for (int c = 0; c < dim; ++c) f += vec[c] * row[c];
                double g = (label - sigmoid(f)) * alpha;
                for (int c = 0; c < dim; ++c) grad[c] += g * row[c];
            }
            for (int c = 0; c < dim; ++c) vec[c] += grad[c];
        }
    }
    return vec;
}

std::vector<std::pair<std::string, double>> Doc2VecModel::most_similar(const std::string& tag,
                                                                       std::size_t k) const {
    if (k < 1) throw std::invalid_argument("most_similar: k must be >= 1");
    auto it = std::find(doc_tags.begin(), doc_tags.end(), tag);
    if (it == doc_tags.end()) {
        throw std::invalid_argument("most_similar: unknown tag '" + tag + "'");
    }
    const auto query = static_cast<std::size_t>(it - doc_tags.begin());
    const int dim = config.dim;
    auto row = [&](std::size_t d) {
        return std::vector<double>(doc_vectors.begin() + d * dim,
                                   doc_vectors.begin() + (d + 1) * dim);
    };
    const auto q = row(query);
    std::vector<std::pair<std::size_t, double>> scored;
    for (std::size_t d = 0; d < n_docs(); ++d) {
        if (d == query) continue;
        scored.emplace_back(d, cosine_similarity(q, row(d)));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (scored.size() > k) scored.resize(k);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(scored.size());
    for (const auto& [d, cos] : scored) out.emplace_back(doc_tags[d], cos);
    return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace conseq
