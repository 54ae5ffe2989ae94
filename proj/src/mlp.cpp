#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "conseq/classifiers.hpp"
#include "conseq/random.hpp"
#include "classifier_util.hpp"

namespace conseq {

namespace {

// Sums in ascending value order, so the result does not depend on how the
// caller happened to order the addends. Keeps column-wise reductions
// invariant under class relabeling.
double canonical_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double v : terms) sum += v;
    return sum;
}

}  // namespace

namespace detail {

double mlp_loss_grad(const MlpWeights& net, const std::vector<std::size_t>& layer_sizes,
                     const FeatureMatrix& X, const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& y, MlpWeights* grad) {
    const std::size_t n_layers = net.weights.size();
    if (grad) {
        grad->weights.resize(n_layers);
        grad->biases.resize(n_layers);
        for (std::size_t l = 0; l < n_layers; ++l) {
            grad->weights[l].assign(net.weights[l].size(), 0.0);
            grad->biases[l].assign(net.biases[l].size(), 0.0);
        }
    }
    const double inv_b = 1.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    std::vector<std::vector<double>> activations(n_layers + 1);
    std::vector<std::vector<double>> deltas(n_layers);
    std::vector<double> scratch;
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        const std::size_t i = rows[idx];
        activations[0] = X.row_copy(i);
        for (std::size_t l = 0; l < n_layers; ++l) {
            const std::size_t in = layer_sizes[l];
            const std::size_t out = layer_sizes[l + 1];
            auto& a = activations[l + 1];
            a.assign(net.biases[l].begin(), net.biases[l].end());
            const auto& prev = activations[l];
            const double* W = net.weights[l].data();
            for (std::size_t r = 0; r < in; ++r) {
                const double v = prev[r];
                if (v == 0.0) continue;
                const double* wr = W + r * out;
                for (std::size_t c = 0; c < out; ++c) a[c] += v * wr[c];
            }
            if (l + 1 < n_layers) {
                for (double& v : a) v = v > 0.0 ? v : 0.0;  // relu
            }
        }
        auto& logits = activations[n_layers];
        double hi = *std::max_element(logits.begin(), logits.end());
        scratch.resize(logits.size());
        for (std::size_t c = 0; c < logits.size(); ++c) scratch[c] = std::exp(logits[c] - hi);
        double z = canonical_sum(scratch);
        loss -= (logits[y[idx]] - hi - std::log(z)) * inv_b;
        if (!grad) continue;

        auto& top = deltas[n_layers - 1];
        top.resize(logits.size());
        for (std::size_t c = 0; c < logits.size(); ++c) {
            top[c] = (std::exp(logits[c] - hi) / z - (c == y[idx] ? 1.0 : 0.0)) * inv_b;
        }
        for (std::size_t l = n_layers; l-- > 0;) {
            const std::size_t in = layer_sizes[l];
            const std::size_t out = layer_sizes[l + 1];
            const auto& delta = deltas[l];
            const auto& prev = activations[l];
            double* gW = grad->weights[l].data();
            for (std::size_t r = 0; r < in; ++r) {
                const double v = prev[r];
                if (v == 0.0) continue;
                double* gr = gW + r * out;
                for (std::size_t c = 0; c < out; ++c) gr[c] += v * delta[c];
            }
            for (std::size_t c = 0; c < out; ++c) grad->biases[l][c] += delta[c];
            if (l == 0) break;
            auto& below = deltas[l - 1];
            below.assign(in, 0.0);
            const double* W = net.weights[l].data();
            for (std::size_t r = 0; r < in; ++r) {
                if (prev[r] <= 0.0) continue;  // relu gate
                const double* wr = W + r * out;
                scratch.resize(out);
                for (std::size_t c = 0; c < out; ++c) scratch[c] = wr[c] * delta[c];
                below[r] = canonical_sum(scratch);
            }
        }
    }
    return loss;
}

}  // namespace detail

namespace {

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::int64_t t = 0;

    explicit AdamState(const detail::MlpWeights& net) {
        for (const auto& w : net.weights) {
            m_w.emplace_back(w.size(), 0.0);
            v_w.emplace_back(w.size(), 0.0);
        }
        for (const auto& b : net.biases) {
            m_b.emplace_back(b.size(), 0.0);
            v_b.emplace_back(b.size(), 0.0);
        }
    }

    void step(detail::MlpWeights& net, const detail::MlpWeights& grad, double lr) {
        ++t;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
                v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
                p[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps);
            }
        };
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            update(net.weights[l], grad.weights[l], m_w[l], v_w[l]);
            update(net.biases[l], grad.biases[l], m_b[l], v_b[l]);
        }
    }
};

}  // namespace

TrainedClassifier train_mlp(const FeatureMatrix& features, const std::vector<int>& labels,
                            const MlpConfig& config) {
    internal::check_aligned(features, labels);
    if (config.max_iter < 1) throw std::invalid_argument("mlp: max_iter must be >= 1");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("mlp: learning_rate must be > 0");
    if (config.hidden_layers.empty()) throw std::invalid_argument("mlp: need a hidden layer");
    for (int h : config.hidden_layers) {
        if (h < 1) throw std::invalid_argument("mlp: hidden width must be >= 1");
    }
    auto X = features.densified();
    auto classes = internal::sorted_classes(labels);
    if (classes.size() < 2) throw std::invalid_argument("mlp: need at least two classes");
    auto y = internal::class_positions(labels, classes);
    const std::size_t n = X.rows();

    std::vector<std::size_t> layer_sizes;
    layer_sizes.push_back(X.cols());
    for (int h : config.hidden_layers) layer_sizes.push_back(static_cast<std::size_t>(h));
    layer_sizes.push_back(classes.size());
    const std::size_t n_layers = layer_sizes.size() - 1;

    detail::MlpWeights net;
    net.weights.resize(n_layers);
    net.biases.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = layer_sizes[l];
        const std::size_t out = layer_sizes[l + 1];
        net.weights[l].resize(in * out);
        net.biases[l].assign(out, 0.0);
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        if (l + 1 < n_layers) {
            Rng rng(mix_seed(config.seed, 0xE0ULL + l));
            for (double& w : net.weights[l]) w = rng.uniform(-limit, limit);
        }
        // The output layer starts at zero: class-symmetric, so a consistent
        // relabeling permutes the whole training trajectory exactly.
    }

    const std::size_t batch =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, config.batch_size)));
    AdamState adam(net);
    detail::MlpWeights grad;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> trace;
    double best_loss = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int epoch = 0; epoch < config.max_iter; ++epoch) {
        Rng shuffle_rng(mix_seed(config.seed, 0xBA7C4ULL + static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(n, start + batch);
            std::vector<std::size_t> rows(order.begin() + start, order.begin() + stop);
            std::vector<std::size_t> targets(rows.size());
            for (std::size_t j = 0; j < rows.size(); ++j) targets[j] = y[rows[j]];
            double loss = detail::mlp_loss_grad(net, layer_sizes, X, rows, targets, &grad);
            adam.step(net, grad, config.learning_rate);
            epoch_loss += loss * static_cast<double>(rows.size());
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            throw std::runtime_error("mlp: non-finite loss at epoch " + std::to_string(epoch));
        }
        trace.push_back(epoch_loss);
        if (best_loss - epoch_loss < config.tol) {
            if (++stall >= config.n_iter_no_change) break;
        } else {
            stall = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }

    MlpParams params;
    params.layer_sizes = std::move(layer_sizes);
    params.weights = std::move(net.weights);
    params.biases = std::move(net.biases);
    params.loss_trace = std::move(trace);
    TrainedClassifier model;
    model.kind = ClassifierKind::mlp;
    model.classes = std::move(classes);
    model.params = std::move(params);
    return model;
}

}  // namespace conseq
