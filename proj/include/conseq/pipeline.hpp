#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "conseq/classifiers.hpp"
#include "conseq/corpus.hpp"
#include "conseq/doc2vec.hpp"
#include "conseq/features.hpp"
#include "conseq/textprep.hpp"
#include "conseq/tfidf.hpp"

namespace conseq {

enum class FeaturizerType { tfidf, doc2vec };

std::string to_string(FeaturizerType type);
FeaturizerType featurizer_from_string(const std::string& name);

/// Every knob of the end-to-end run in one place. apply_seed spreads a
/// master seed over all seeded components so one --seed value pins the
/// whole pipeline.
struct PipelineConfig {
    CleaningOptions cleaning;
    TfidfConfig tfidf;
    Doc2VecConfig doc2vec;
    SplitConfig split;
    int min_count = 3;
    LinearSvcConfig linear_svc;
    LogisticRegressionConfig logistic_regression;
    MultinomialNbConfig multinomial_nb;
    GaussianNbConfig gaussian_nb;
    RandomForestConfig random_forest;
    MlpConfig mlp;
    std::uint64_t seed = 0;

    void apply_seed(std::uint64_t master);
    bool operator==(const PipelineConfig&) const = default;
};

/// A fitted featurizer: either a tf-idf model or a Doc2Vec model, with the
/// cleaning options documents must pass through before transformation.
struct Featurizer {
    FeaturizerType type = FeaturizerType::tfidf;
    CleaningOptions cleaning;
    std::variant<TfidfModel, Doc2VecModel> model;

    std::size_t dimension() const;

    /// Features for already-tokenized documents. Doc2Vec features of unseen
    /// documents come from seeded inference against frozen weights.
    FeatureMatrix transform(const std::vector<TokenizedDocument>& docs,
                            std::uint64_t infer_seed) const;

    /// Features for raw texts (cleaning applied first).
    FeatureMatrix transform_texts(const std::vector<std::string>& texts,
                                  std::uint64_t infer_seed) const;

    bool operator==(const Featurizer&) const = default;
};

std::vector<TokenizedDocument> tokenize_records(const Dataset& dataset,
                                                const CleaningOptions& options);
std::vector<int> labels_of(const Dataset& dataset);

struct FittedFeatures {
    Featurizer featurizer;
    FeatureMatrix train;  // features of the training documents
};

/// Fits the featurizer on the training documents only. For Doc2Vec the
/// training features are the learned paragraph vectors themselves.
FittedFeatures fit_features(FeaturizerType type, const std::vector<TokenizedDocument>& train_docs,
                            const std::vector<std::string>& train_tags,
                            const PipelineConfig& config);

/// Trains the requested classifier family with its PipelineConfig settings.
TrainedClassifier train_kind(ClassifierKind kind, const FeatureMatrix& features,
                             const std::vector<int>& labels, const PipelineConfig& config);

}  // namespace conseq
