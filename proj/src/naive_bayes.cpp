#include <cmath>
#include <stdexcept>

#include "conseq/classifiers.hpp"
#include "classifier_util.hpp"

namespace conseq {

TrainedClassifier train_multinomial_nb(const FeatureMatrix& X, const std::vector<int>& labels,
                                       const MultinomialNbConfig& config) {
    internal::check_aligned(X, labels);
    if (config.alpha <= 0.0) throw std::invalid_argument("multinomial_nb: alpha must be > 0");
    if (X.min_value() < 0.0) {
        throw std::domain_error(
            "multinomial_nb requires non-negative features; embedding features such as "
            "Doc2Vec vectors are signed, use gaussian_nb for those");
    }
    auto classes = internal::sorted_classes(labels);
    auto y = internal::class_positions(labels, classes);
    const std::size_t d = X.cols();
    const std::size_t k = classes.size();

    std::vector<double> feature_counts(k * d, 0.0);
    std::vector<double> class_totals(k, 0.0);
    std::vector<double> class_sizes(k, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const std::size_t p = y[i];
        class_sizes[p] += 1.0;
        X.for_each_entry(i, [&](std::size_t c, double v) {
            feature_counts[p * d + c] += v;
            class_totals[p] += v;
        });
    }

    MultinomialNbParams params;
    params.n_features = d;
    params.alpha = config.alpha;
    params.class_log_prior.resize(k);
    params.feature_log_prob.resize(k * d);
    const double n = static_cast<double>(X.rows());
    for (std::size_t p = 0; p < k; ++p) {
        params.class_log_prior[p] = std::log(class_sizes[p] / n);
        const double denom = class_totals[p] + config.alpha * static_cast<double>(d);
        for (std::size_t c = 0; c < d; ++c) {
            params.feature_log_prob[p * d + c] =
                std::log((feature_counts[p * d + c] + config.alpha) / denom);
        }
    }
    TrainedClassifier model;
    model.kind = ClassifierKind::multinomial_nb;
    model.classes = std::move(classes);
    model.params = std::move(params);
    return model;
}

TrainedClassifier train_gaussian_nb(const FeatureMatrix& features, const std::vector<int>& labels,
                                    const GaussianNbConfig& config) {
    internal::check_aligned(features, labels);
    if (config.var_smoothing <= 0.0) {
        throw std::invalid_argument("gaussian_nb: var_smoothing must be > 0");
    }
    auto X = features.densified();
    auto classes = internal::sorted_classes(labels);
    auto y = internal::class_positions(labels, classes);
    const std::size_t d = X.cols();
    const std::size_t k = classes.size();
    const std::size_t n = X.rows();

    GaussianNbParams params;
    params.n_features = d;
    params.class_log_prior.resize(k);
    params.means.assign(k * d, 0.0);
    params.variances.assign(k * d, 0.0);
    std::vector<double> sizes(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sizes[y[i]] += 1.0;
        for (std::size_t c = 0; c < d; ++c) params.means[y[i] * d + c] += X.at(i, c);
    }
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t c = 0; c < d; ++c) params.means[p * d + c] /= sizes[p];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            double diff = X.at(i, c) - params.means[y[i] * d + c];
            params.variances[y[i] * d + c] += diff * diff;
        }
    }
    for (std::size_t p = 0; p < k; ++p) {
        params.class_log_prior[p] = std::log(sizes[p] / static_cast<double>(n));
        for (std::size_t c = 0; c < d; ++c) params.variances[p * d + c] /= sizes[p];
    }

    // Floor every variance at var_smoothing times the largest per-feature
    // variance of the pooled data, so constant features stay usable.
    double max_var = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X.at(i, c);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double diff = X.at(i, c) - mean;
            sq += diff * diff;
        }
        max_var = std::max(max_var, sq / static_cast<double>(n));
    }
    double floor = config.var_smoothing * max_var;
    if (floor <= 0.0) floor = config.var_smoothing;
    for (double& v : params.variances) v = std::max(v, floor);

    TrainedClassifier model;
    model.kind = ClassifierKind::gaussian_nb;
    model.classes = std::move(classes);
    model.params = std::move(params);
    return model;
}

}  // namespace conseq
