#include <cmath>
#include <stdexcept>

#include "conseq/classifiers.hpp"
#include "classifier_util.hpp"

namespace conseq {

namespace {

// Mean squared augmented-row norm; drives the automatic step size.
double mean_row_energy(const FeatureMatrix& X) {
    double sum = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) sum += X.row_squared_norm(i) + 1.0;
    return sum / static_cast<double>(X.rows());
}

}  // namespace

namespace detail {

double svc_loss_grad(const FeatureMatrix& X, const std::vector<double>& y,
                     const std::vector<double>& w, double lambda, std::vector<double>* grad) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (grad) {
        grad->assign(w.size(), 0.0);
        for (std::size_t j = 0; j < w.size(); ++j) (*grad)[j] = lambda * w[j];
    }
    double loss = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) loss += 0.5 * lambda * w[j] * w[j];
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = X.dot_row(i, w.data()) + w[d];
        double margin = 1.0 - y[i] * f;
        if (margin <= 0.0) continue;
        loss += margin * margin * inv_n;
        if (grad) {
            double coeff = -2.0 * margin * y[i] * inv_n;
            X.add_row_scaled(i, coeff, grad->data());
            (*grad)[d] += coeff;
        }
    }
    return loss;
}

double logreg_loss_grad(const FeatureMatrix& X, const std::vector<std::size_t>& y,
                        std::size_t n_classes, const std::vector<double>& W, double l2,
                        std::vector<double>* grad) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    const std::size_t stride = d + 1;
    if (W.size() != n_classes * stride) {
        throw std::invalid_argument("logreg_loss_grad: weight shape mismatch");
    }
    if (grad) grad->assign(W.size(), 0.0);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> logits(n_classes);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < n_classes; ++p) {
            const double* w = W.data() + p * stride;
            logits[p] = X.dot_row(i, w) + w[d];
        }
        double hi = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (double& v : logits) {
            v = std::exp(v - hi);
            z += v;
        }
        loss -= std::log(logits[y[i]] / z) * inv_n;
        if (grad) {
            for (std::size_t p = 0; p < n_classes; ++p) {
                double residual = (logits[p] / z - (p == y[i] ? 1.0 : 0.0)) * inv_n;
                double* g = grad->data() + p * stride;
                X.add_row_scaled(i, residual, g);
                g[d] += residual;
            }
        }
    }
    // ridge on everything except the bias column
    for (std::size_t p = 0; p < n_classes; ++p) {
        for (std::size_t j = 0; j < d; ++j) {
            double w = W[p * stride + j];
            loss += 0.5 * l2 * w * w;
            if (grad) (*grad)[p * stride + j] += l2 * w;
        }
    }
    return loss;
}

}  // namespace detail

TrainedClassifier train_linear_svc(const FeatureMatrix& X, const std::vector<int>& labels,
                                   const LinearSvcConfig& config) {
    internal::check_aligned(X, labels);
    if (config.c <= 0.0) throw std::invalid_argument("linear_svc: C must be > 0");
    if (config.epochs < 1) throw std::invalid_argument("linear_svc: epochs must be >= 1");
    auto classes = internal::sorted_classes(labels);
    if (classes.size() < 2) {
        throw std::invalid_argument("linear_svc: need at least two classes");
    }
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    const double lambda = 1.0 / (config.c * static_cast<double>(n));
    const double curvature = lambda + 2.0 * mean_row_energy(X);
    const double eta0 = config.learning_rate > 0.0 ? config.learning_rate : 1.0 / curvature;

    LinearParams params;
    params.n_features = d;
    params.weights.assign(classes.size() * (d + 1), 0.0);
    std::vector<double> y(n), w(d + 1), grad;
    for (std::size_t p = 0; p < classes.size(); ++p) {
        for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == classes[p] ? 1.0 : -1.0;
        std::fill(w.begin(), w.end(), 0.0);
        for (int t = 0; t < config.epochs; ++t) {
            detail::svc_loss_grad(X, y, w, lambda, &grad);
            double eta = eta0 / (1.0 + lambda * eta0 * static_cast<double>(t));
            for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * grad[j];
        }
        std::copy(w.begin(), w.end(), params.weights.begin() + p * (d + 1));
    }
    TrainedClassifier model;
    model.kind = ClassifierKind::linear_svc;
    model.classes = std::move(classes);
    model.params = std::move(params);
    return model;
}

TrainedClassifier train_logistic_regression(const FeatureMatrix& X,
                                            const std::vector<int>& labels,
                                            const LogisticRegressionConfig& config) {
    internal::check_aligned(X, labels);
    if (config.l2 <= 0.0) throw std::invalid_argument("logistic_regression: l2 must be > 0");
    if (config.epochs < 1) throw std::invalid_argument("logistic_regression: epochs must be >= 1");
    auto classes = internal::sorted_classes(labels);
    if (classes.size() < 2) {
        throw std::invalid_argument("logistic_regression: need at least two classes");
    }
    const std::size_t d = X.cols();
    auto y = internal::class_positions(labels, classes);
    const double curvature = 0.5 * mean_row_energy(X) + config.l2;
    const double eta = config.learning_rate > 0.0 ? config.learning_rate : 1.0 / curvature;

    std::vector<double> W(classes.size() * (d + 1), 0.0), grad;
    for (int t = 0; t < config.epochs; ++t) {
        detail::logreg_loss_grad(X, y, classes.size(), W, config.l2, &grad);
        for (std::size_t j = 0; j < W.size(); ++j) W[j] -= eta * grad[j];
    }
    TrainedClassifier model;
    model.kind = ClassifierKind::logistic_regression;
    model.classes = std::move(classes);
    LinearParams params;
    params.n_features = d;
    params.weights = std::move(W);
    model.params = std::move(params);
    return model;
}

}  // namespace conseq
