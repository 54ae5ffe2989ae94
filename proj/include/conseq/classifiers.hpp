#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "conseq/features.hpp"

namespace conseq {

enum class ClassifierKind {
    linear_svc,
    logistic_regression,
    multinomial_nb,
    gaussian_nb,
    random_forest,
    mlp,
};

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct LinearSvcConfig {
    double c = 1.0;  // inverse regularization strength
    int epochs = 1000;
    /// Step size; <= 0 derives it from the data curvature bound.
    double learning_rate = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const LinearSvcConfig&) const = default;
};

struct LogisticRegressionConfig {
    double l2 = 1e-4;
    int epochs = 1000;
    double learning_rate = 0.0;  // <= 0: auto from curvature bound
    std::uint64_t seed = 0;

    bool operator==(const LogisticRegressionConfig&) const = default;
};

struct MultinomialNbConfig {
    double alpha = 1.0;

    bool operator==(const MultinomialNbConfig&) const = default;
};

struct GaussianNbConfig {
    double var_smoothing = 1e-9;

    bool operator==(const GaussianNbConfig&) const = default;
};

struct RandomForestConfig {
    int n_trees = 100;
    /// Candidate features per split; <= 0 means floor(sqrt(n_features)).
    int max_features = 0;
    bool bootstrap = true;
    std::uint64_t seed = 0;
    /// 1 = sequential; otherwise trees are built concurrently. Per-tree
    /// seeding makes the result identical either way (0 = hardware default).
    int threads = 1;

    bool operator==(const RandomForestConfig&) const = default;
};

struct MlpConfig {
    std::vector<int> hidden_layers = {100};
    int max_iter = 1000;
    double learning_rate = 1e-3;  // adam step size
    int batch_size = 200;         // clamped to n_samples
    double tol = 1e-6;
    int n_iter_no_change = 10;
    std::uint64_t seed = 0;

    bool operator==(const MlpConfig&) const = default;
};

/// One-vs-rest linear decision machines (squared hinge) or a multinomial
/// softmax, depending on kind. weights is n_classes x (n_features + 1),
/// bias last.
struct LinearParams {
    std::size_t n_features = 0;
    std::vector<double> weights;

    bool operator==(const LinearParams&) const = default;
};

struct MultinomialNbParams {
    std::size_t n_features = 0;
    double alpha = 1.0;
    std::vector<double> class_log_prior;    // per class
    std::vector<double> feature_log_prob;   // n_classes x n_features

    bool operator==(const MultinomialNbParams&) const = default;
};

struct GaussianNbParams {
    std::size_t n_features = 0;
    std::vector<double> class_log_prior;
    std::vector<double> means;      // n_classes x n_features
    std::vector<double> variances;  // n_classes x n_features, floored

    bool operator==(const GaussianNbParams&) const = default;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;  // class position at leaves

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict_position(const double* row) const;
    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestParams {
    std::size_t n_features = 0;
    std::vector<DecisionTree> trees;

    bool operator==(const RandomForestParams&) const = default;
};

struct MlpParams {
    std::vector<std::size_t> layer_sizes;       // input, hidden..., output
    std::vector<std::vector<double>> weights;   // per layer, (in x out) row-major
    std::vector<std::vector<double>> biases;    // per layer
    std::vector<double> loss_trace;             // mean batch loss per epoch

    bool operator==(const MlpParams&) const = default;
};

struct TrainedClassifier {
    ClassifierKind kind = ClassifierKind::linear_svc;
    std::vector<int> classes;  // sorted class ids seen in training
    std::variant<LinearParams, MultinomialNbParams, GaussianNbParams, RandomForestParams,
                 MlpParams>
        params;

    /// One label per row, always a member of classes. Argmax ties resolve
    /// to the lower class id. Throws on dimensionality mismatch.
    std::vector<int> predict(const FeatureMatrix& features) const;

    /// Per-row class probabilities (softmax models only: logistic_regression
    /// and mlp). Rows sum to 1.
    std::vector<std::vector<double>> predict_proba(const FeatureMatrix& features) const;

    bool operator==(const TrainedClassifier&) const = default;
};

TrainedClassifier train_linear_svc(const FeatureMatrix& features, const std::vector<int>& labels,
                                   const LinearSvcConfig& config = {});
TrainedClassifier train_logistic_regression(const FeatureMatrix& features,
                                            const std::vector<int>& labels,
                                            const LogisticRegressionConfig& config = {});
TrainedClassifier train_multinomial_nb(const FeatureMatrix& features,
                                       const std::vector<int>& labels,
                                       const MultinomialNbConfig& config = {});
TrainedClassifier train_gaussian_nb(const FeatureMatrix& features, const std::vector<int>& labels,
                                    const GaussianNbConfig& config = {});
TrainedClassifier train_random_forest(const FeatureMatrix& features,
                                      const std::vector<int>& labels,
                                      const RandomForestConfig& config = {});
TrainedClassifier train_mlp(const FeatureMatrix& features, const std::vector<int>& labels,
                            const MlpConfig& config = {});

namespace detail {

/// Softmax cross-entropy with L2 penalty on non-bias weights. W is
/// n_classes x (n_features + 1), bias last; y holds class positions.
/// Fills *grad (same shape) when non-null. Exposed so tests can check the
/// analytic gradient against finite differences.
double logreg_loss_grad(const FeatureMatrix& features, const std::vector<std::size_t>& y,
                        std::size_t n_classes, const std::vector<double>& W, double l2,
                        std::vector<double>* grad);

/// Squared-hinge objective for one one-vs-rest machine: w is
/// n_features + 1 (bias last), y in {-1, +1}, ridge strength lambda.
double svc_loss_grad(const FeatureMatrix& features, const std::vector<double>& y,
                     const std::vector<double>& w, double lambda, std::vector<double>* grad);

struct MlpWeights {
    std::vector<std::vector<double>> weights;  // (in x out) row-major per layer
    std::vector<std::vector<double>> biases;
};

/// Mean softmax cross-entropy of a ReLU network over the given rows.
/// Fills *grad (same shapes) when non-null; FD-checkable.
double mlp_loss_grad(const MlpWeights& net, const std::vector<std::size_t>& layer_sizes,
                     const FeatureMatrix& features, const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& y, MlpWeights* grad);

}  // namespace detail

}  // namespace conseq
