#include <cmath>
#include <stdexcept>

#include "conseq/classifiers.hpp"
#include "classifier_util.hpp"

namespace conseq {

namespace {

void check_dims(std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw std::invalid_argument("predict: feature dimensionality " + std::to_string(got) +
                                    " does not match training dimensionality " +
                                    std::to_string(expected));
    }
}

std::vector<double> linear_scores(const LinearParams& params, const FeatureMatrix& X,
                                  std::size_t row, std::size_t n_classes) {
    const std::size_t stride = params.n_features + 1;
    std::vector<double> scores(n_classes);
    for (std::size_t p = 0; p < n_classes; ++p) {
        const double* w = params.weights.data() + p * stride;
        scores[p] = X.dot_row(row, w) + w[params.n_features];
    }
    return scores;
}

std::vector<double> mlp_scores(const MlpParams& params, const std::vector<double>& input) {
    std::vector<double> a = input;
    std::vector<double> next;
    const std::size_t n_layers = params.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = params.layer_sizes[l];
        const std::size_t out = params.layer_sizes[l + 1];
        next.assign(params.biases[l].begin(), params.biases[l].end());
        const double* W = params.weights[l].data();
        for (std::size_t r = 0; r < in; ++r) {
            const double v = a[r];
            if (v == 0.0) continue;
            const double* wr = W + r * out;
            for (std::size_t c = 0; c < out; ++c) next[c] += v * wr[c];
        }
        if (l + 1 < n_layers) {
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        }
        a.swap(next);
    }
    return a;
}

std::vector<double> softmax(std::vector<double> logits) {
    double hi = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& v : logits) {
        v = std::exp(v - hi);
        z += v;
    }
    for (double& v : logits) v /= z;
    return logits;
}

std::vector<double> row_scores(const TrainedClassifier& model, const FeatureMatrix& X,
                               std::size_t i) {
    const std::size_t k = model.classes.size();
    switch (model.kind) {
        case ClassifierKind::linear_svc:
        case ClassifierKind::logistic_regression:
            return linear_scores(std::get<LinearParams>(model.params), X, i, k);
        case ClassifierKind::multinomial_nb: {
            const auto& p = std::get<MultinomialNbParams>(model.params);
            std::vector<double> scores(p.class_log_prior);
            X.for_each_entry(i, [&](std::size_t c, double v) {
                for (std::size_t q = 0; q < k; ++q) {
                    scores[q] += v * p.feature_log_prob[q * p.n_features + c];
                }
            });
            return scores;
        }
        case ClassifierKind::gaussian_nb: {
            const auto& p = std::get<GaussianNbParams>(model.params);
            std::vector<double> scores(p.class_log_prior);
            auto x = X.row_copy(i);
            constexpr double kLog2Pi = 1.8378770664093453;
            for (std::size_t q = 0; q < k; ++q) {
                for (std::size_t c = 0; c < p.n_features; ++c) {
                    double var = p.variances[q * p.n_features + c];
                    double diff = x[c] - p.means[q * p.n_features + c];
                    scores[q] -= 0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
                }
            }
            return scores;
        }
        case ClassifierKind::random_forest: {
            const auto& p = std::get<RandomForestParams>(model.params);
            auto x = X.row_copy(i);
            std::vector<double> votes(k, 0.0);
            for (const auto& tree : p.trees) {
                votes[static_cast<std::size_t>(tree.predict_position(x.data()))] += 1.0;
            }
            return votes;
        }
        case ClassifierKind::mlp:
            return mlp_scores(std::get<MlpParams>(model.params), X.row_copy(i));
    }
    throw std::logic_error("row_scores: unhandled classifier kind");
}

std::size_t expected_features(const TrainedClassifier& model) {
    switch (model.kind) {
        case ClassifierKind::linear_svc:
        case ClassifierKind::logistic_regression:
            return std::get<LinearParams>(model.params).n_features;
        case ClassifierKind::multinomial_nb:
            return std::get<MultinomialNbParams>(model.params).n_features;
        case ClassifierKind::gaussian_nb:
            return std::get<GaussianNbParams>(model.params).n_features;
        case ClassifierKind::random_forest:
            return std::get<RandomForestParams>(model.params).n_features;
        case ClassifierKind::mlp:
            return std::get<MlpParams>(model.params).layer_sizes.front();
    }
    throw std::logic_error("expected_features: unhandled classifier kind");
}

}  // namespace

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::linear_svc: return "linear_svc";
        case ClassifierKind::logistic_regression: return "logistic_regression";
        case ClassifierKind::multinomial_nb: return "multinomial_nb";
        case ClassifierKind::gaussian_nb: return "gaussian_nb";
        case ClassifierKind::random_forest: return "random_forest";
        case ClassifierKind::mlp: return "mlp";
    }
    throw std::logic_error("to_string: unhandled classifier kind");
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    if (name == "linear_svc") return ClassifierKind::linear_svc;
    if (name == "logistic_regression" || name == "logreg") {
        return ClassifierKind::logistic_regression;
    }
    if (name == "multinomial_nb") return ClassifierKind::multinomial_nb;
    if (name == "gaussian_nb") return ClassifierKind::gaussian_nb;
    if (name == "random_forest") return ClassifierKind::random_forest;
    if (name == "mlp") return ClassifierKind::mlp;
    throw std::invalid_argument("unknown classifier kind: " + name);
}

std::vector<int> TrainedClassifier::predict(const FeatureMatrix& features) const {
    if (features.rows() > 0) check_dims(expected_features(*this), features.cols());
    std::vector<int> out;
    out.reserve(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto scores = row_scores(*this, features, i);
        out.push_back(classes[internal::argmax_first(scores)]);
    }
    return out;
}

std::vector<std::vector<double>> TrainedClassifier::predict_proba(
    const FeatureMatrix& features) const {
    if (kind != ClassifierKind::logistic_regression && kind != ClassifierKind::mlp) {
        throw std::logic_error("predict_proba: only softmax models expose probabilities");
    }
    if (features.rows() > 0) check_dims(expected_features(*this), features.cols());
    std::vector<std::vector<double>> out;
    out.reserve(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        out.push_back(softmax(row_scores(*this, features, i)));
    }
    return out;
}

}  // namespace conseq
