#pragma once

#include <map>
#include <string>
#include <vector>

#include "conseq/classifiers.hpp"
#include "conseq/corpus.hpp"
#include "conseq/pipeline.hpp"

namespace conseq {

struct ConfusionMatrix {
    std::vector<int> classes;              // sorted union of true and predicted
    std::vector<std::vector<int>> counts;  // counts[i][j]: true class i predicted as j

    int total() const;
    bool operator==(const ConfusionMatrix&) const = default;
};

struct PerClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int support = 0;
    bool operator==(const PerClassMetrics&) const = default;
};

struct EvaluationReport {
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    // unweighted per-class means, for callers that prefer macro averaging
    double precision_macro = 0.0;
    double recall_macro = 0.0;
    double f1_macro = 0.0;
    std::map<int, PerClassMetrics> per_class;
    ConfusionMatrix confusion;
    bool operator==(const EvaluationReport&) const = default;
};

/// Per-class precision/recall/F1 with the 0-when-undefined convention,
/// aggregated with true-class supports as weights (macro means included).
EvaluationReport evaluate(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels);

/// Share of the most frequent label; the chance-level floor for accuracy.
double majority_baseline(const std::vector<int>& labels);

struct ComparisonRow {
    FeaturizerType featurizer;
    ClassifierKind model;
    EvaluationReport report;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    std::uint64_t seed = 0;
    PipelineConfig config;  // echoed so the run can be repeated exactly
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double test_majority_baseline = 0.0;
};

/// The full featurizer x model matrix on one stratified split: both
/// featurizers are fitted on the train split only, multinomial NB runs on
/// tf-idf features and Gaussian NB on Doc2Vec features.
ComparisonTable run_comparison(const Dataset& dataset, const PipelineConfig& config);

}  // namespace conseq
