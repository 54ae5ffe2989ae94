#include "conseq/pipeline.hpp"

#include <stdexcept>

#include "conseq/random.hpp"

namespace conseq {

std::string to_string(FeaturizerType type) {
    return type == FeaturizerType::tfidf ? "tfidf" : "doc2vec";
}

FeaturizerType featurizer_from_string(const std::string& name) {
    if (name == "tfidf") return FeaturizerType::tfidf;
    if (name == "doc2vec") return FeaturizerType::doc2vec;
    throw std::invalid_argument("unknown featurizer: " + name);
}

void PipelineConfig::apply_seed(std::uint64_t master) {
    seed = master;
    split.seed = mix_seed(master, 1);
    doc2vec.seed = mix_seed(master, 2);
    linear_svc.seed = mix_seed(master, 3);
    logistic_regression.seed = mix_seed(master, 4);
    random_forest.seed = mix_seed(master, 5);
    mlp.seed = mix_seed(master, 6);
}

std::size_t Featurizer::dimension() const {
    if (type == FeaturizerType::tfidf) return std::get<TfidfModel>(model).vocabulary.size();
    return static_cast<std::size_t>(std::get<Doc2VecModel>(model).config.dim);
}

FeatureMatrix Featurizer::transform(const std::vector<TokenizedDocument>& docs,
                                    std::uint64_t infer_seed) const {
    if (type == FeaturizerType::tfidf) {
        const auto& m = std::get<TfidfModel>(model);
        return FeatureMatrix::from_sparse(transform_corpus(m, docs), m.vocabulary.size());
    }
    const auto& m = std::get<Doc2VecModel>(model);
    const auto dim = static_cast<std::size_t>(m.config.dim);
    std::vector<double> data(docs.size() * dim, 0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto vec = m.infer_vector(docs[i], m.config.infer_epochs, mix_seed(infer_seed, i));
        std::copy(vec.begin(), vec.end(), data.begin() + i * dim);
    }
    return FeatureMatrix::from_dense(docs.size(), dim, std::move(data));
}

FeatureMatrix Featurizer::transform_texts(const std::vector<std::string>& texts,
                                          std::uint64_t infer_seed) const {
    std::vector<TokenizedDocument> docs;
    docs.reserve(texts.size());
    for (const auto& t : texts) docs.push_back(clean_and_tokenize(t, cleaning));
    return transform(docs, infer_seed);
}

std::vector<TokenizedDocument> tokenize_records(const Dataset& dataset,
                                                const CleaningOptions& options) {
    std::vector<TokenizedDocument> docs;
    docs.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) {
        docs.push_back(clean_and_tokenize(full_text(rec), options));
    }
    return docs;
}

std::vector<int> labels_of(const Dataset& dataset) {
    std::vector<int> labels;
    labels.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) labels.push_back(rec.cluster_label);
    return labels;
}

FittedFeatures fit_features(FeaturizerType type, const std::vector<TokenizedDocument>& train_docs,
                            const std::vector<std::string>& train_tags,
                            const PipelineConfig& config) {
    FittedFeatures out;
    out.featurizer.type = type;
    out.featurizer.cleaning = config.cleaning;
    if (type == FeaturizerType::tfidf) {
        auto model = fit_tfidf(train_docs, config.tfidf);
        out.train =
            FeatureMatrix::from_sparse(transform_corpus(model, train_docs), model.vocabulary.size());
        out.featurizer.model = std::move(model);
        return out;
    }
    if (train_tags.size() != train_docs.size()) {
        throw std::invalid_argument("fit_features: tags must align with documents");
    }
    std::vector<TaggedDocument> tagged(train_docs.size());
    for (std::size_t i = 0; i < train_docs.size(); ++i) {
        tagged[i] = TaggedDocument{train_tags[i], train_docs[i]};
    }
    auto model = train_doc2vec(tagged, config.doc2vec);
    const auto dim = static_cast<std::size_t>(model.config.dim);
    out.train = FeatureMatrix::from_dense(model.n_docs(), dim, model.doc_vectors);
    out.featurizer.model = std::move(model);
    return out;
}

TrainedClassifier train_kind(ClassifierKind kind, const FeatureMatrix& features,
                             const std::vector<int>& labels, const PipelineConfig& config) {
    switch (kind) {
        case ClassifierKind::linear_svc:
            return train_linear_svc(features, labels, config.linear_svc);
        case ClassifierKind::logistic_regression:
            return train_logistic_regression(features, labels, config.logistic_regression);
        case ClassifierKind::multinomial_nb:
            return train_multinomial_nb(features, labels, config.multinomial_nb);
        case ClassifierKind::gaussian_nb:
            return train_gaussian_nb(features, labels, config.gaussian_nb);
        case ClassifierKind::random_forest:
            return train_random_forest(features, labels, config.random_forest);
        case ClassifierKind::mlp:
            return train_mlp(features, labels, config.mlp);
    }
    throw std::logic_error("train_kind: unhandled classifier kind");
}

}  // namespace conseq
