#include "conseq/eval.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "conseq/random.hpp"

namespace conseq {

int ConfusionMatrix::total() const {
    int sum = 0;
    for (const auto& row : counts) {
        for (int c : row) sum += c;
    }
    return sum;
}

EvaluationReport evaluate(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels) {
    if (true_labels.empty()) throw std::invalid_argument("evaluate: empty input");
    if (true_labels.size() != predicted_labels.size()) {
        throw std::invalid_argument("evaluate: label vectors differ in length");
    }
    std::vector<int> classes(true_labels);
    classes.insert(classes.end(), predicted_labels.begin(), predicted_labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::map<int, std::size_t> position;
    for (std::size_t i = 0; i < classes.size(); ++i) position[classes[i]] = i;

    EvaluationReport report;
    report.confusion.classes = classes;
    report.confusion.counts.assign(classes.size(), std::vector<int>(classes.size(), 0));
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        ++report.confusion.counts[position[true_labels[i]]][position[predicted_labels[i]]];
    }

    const double n = static_cast<double>(true_labels.size());
    double trace = 0.0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        trace += report.confusion.counts[i][i];
    }
    report.accuracy = trace / n;

    for (std::size_t i = 0; i < classes.size(); ++i) {
        int tp = report.confusion.counts[i][i];
        int support = 0, predicted = 0;
        for (std::size_t j = 0; j < classes.size(); ++j) {
            support += report.confusion.counts[i][j];
            predicted += report.confusion.counts[j][i];
        }
        PerClassMetrics m;
        m.support = support;
        m.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
        m.recall = support > 0 ? static_cast<double>(tp) / support : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        report.per_class[classes[i]] = m;
        const double weight = static_cast<double>(support) / n;
        report.precision_weighted += weight * m.precision;
        report.recall_weighted += weight * m.recall;
        report.f1_weighted += weight * m.f1;
        report.precision_macro += m.precision / classes.size();
        report.recall_macro += m.recall / classes.size();
        report.f1_macro += m.f1 / classes.size();
    }
    return report;
}

double majority_baseline(const std::vector<int>& labels) {
    if (labels.empty()) return 0.0;
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    return static_cast<double>(best) / static_cast<double>(labels.size());
}

ComparisonTable run_comparison(const Dataset& dataset, const PipelineConfig& config) {
    auto [train, test] = stratified_split(dataset, config.split);
    auto train_docs = tokenize_records(train, config.cleaning);
    auto test_docs = tokenize_records(test, config.cleaning);
    auto train_labels = labels_of(train);
    auto test_labels = labels_of(test);
    std::vector<std::string> train_tags;
    for (const auto& rec : train.records) train_tags.push_back(rec.id);

    ComparisonTable table;
    table.seed = config.seed;
    table.config = config;
    table.n_train = train.records.size();
    table.n_test = test.records.size();
    table.test_majority_baseline = majority_baseline(test_labels);

    // Table layout: softmax/margin models on both featurizers, multinomial
    // NB on tf-idf counts, Gaussian NB on the signed embedding features.
    const std::vector<ClassifierKind> shared = {
        ClassifierKind::logistic_regression,
        ClassifierKind::linear_svc,
        ClassifierKind::mlp,
    };
    for (FeaturizerType type : {FeaturizerType::tfidf, FeaturizerType::doc2vec}) {
        auto fitted = fit_features(type, train_docs, train_tags, config);
        auto test_features =
            fitted.featurizer.transform(test_docs, mix_seed(config.seed, 0x7E57ULL));
        std::vector<ClassifierKind> kinds = shared;
        kinds.push_back(type == FeaturizerType::tfidf ? ClassifierKind::multinomial_nb
                                                      : ClassifierKind::gaussian_nb);
        kinds.push_back(ClassifierKind::random_forest);
        for (ClassifierKind kind : kinds) {
            auto model = train_kind(kind, fitted.train, train_labels, config);
            auto predictions = model.predict(test_features);
            table.rows.push_back({type, kind, evaluate(test_labels, predictions)});
        }
    }
    return table;
}

}  // namespace conseq
