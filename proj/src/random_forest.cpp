#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "conseq/classifiers.hpp"
#include "conseq/random.hpp"
#include "classifier_util.hpp"

namespace conseq {

namespace {

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sum = 0.0;
    for (double c : counts) sum += (c / total) * (c / total);
    return 1.0 - sum;
}

struct TreeBuilder {
    const FeatureMatrix& X;
    const std::vector<std::size_t>& y;
    std::size_t n_classes;
    int max_features;
    Rng rng;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> feature_pool;

    int majority_leaf(const std::vector<double>& counts) {
        std::size_t best = 0;
        for (std::size_t p = 1; p < counts.size(); ++p) {
            if (counts[p] > counts[best]) best = p;  // ties keep the lower position
        }
        TreeNode leaf;
        leaf.label = static_cast<int>(best);
        nodes.push_back(leaf);
        return static_cast<int>(nodes.size() - 1);
    }

    // indices [begin, end) of the working sample buffer
    int build(std::vector<std::size_t>& samples, std::size_t begin, std::size_t end) {
        const auto n = static_cast<double>(end - begin);
        std::vector<double> counts(n_classes, 0.0);
        for (std::size_t i = begin; i < end; ++i) counts[y[samples[i]]] += 1.0;
        const double parent_gini = gini(counts, n);
        if (end - begin < 2 || parent_gini == 0.0) return majority_leaf(counts);

        // sample max_features distinct candidates, then scan them in
        // ascending order so the chosen split never depends on draw order
        for (std::size_t i = 0; i < feature_pool.size(); ++i) feature_pool[i] = i;
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(max_features),
                                             feature_pool.size());
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + rng.index(feature_pool.size() - i);
            std::swap(feature_pool[i], feature_pool[j]);
        }
        std::vector<std::size_t> candidates(feature_pool.begin(), feature_pool.begin() + k);
        std::sort(candidates.begin(), candidates.end());

        // any valid threshold is acceptable (zero-gain splits included, so
        // patterns like xor can still be shattered); ties keep the first,
        // i.e. lowest feature then lowest threshold
        double best_decrease = -std::numeric_limits<double>::infinity();
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;
        std::vector<std::pair<double, std::size_t>> ordered(end - begin);
        std::vector<double> left_counts(n_classes);
        for (std::size_t f : candidates) {
            for (std::size_t i = begin; i < end; ++i) {
                ordered[i - begin] = {X.at(samples[i], f), samples[i]};
            }
            std::sort(ordered.begin(), ordered.end());
            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
                left_counts[y[ordered[i].second]] += 1.0;
                if (ordered[i].first == ordered[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                double right = 0.0, left = 0.0;
                for (std::size_t p = 0; p < n_classes; ++p) {
                    double l = left_counts[p] / nl;
                    double r = (counts[p] - left_counts[p]) / nr;
                    left += l * l;
                    right += r * r;
                }
                double weighted = (nl / n) * (1.0 - left) + (nr / n) * (1.0 - right);
                double decrease = parent_gini - weighted;
                if (decrease > best_decrease) {
                    best_decrease = decrease;
                    best_feature = f;
                    best_threshold = 0.5 * (ordered[i].first + ordered[i + 1].first);
                    found = true;
                }
            }
        }
        if (!found) return majority_leaf(counts);

        auto mid = std::partition(samples.begin() + begin, samples.begin() + end,
                                  [&](std::size_t s) {
                                      return X.at(s, best_feature) <= best_threshold;
                                  });
        const auto split = static_cast<std::size_t>(mid - samples.begin());
        const auto node_index = static_cast<int>(nodes.size());
        TreeNode node;
        node.feature = static_cast<int>(best_feature);
        node.threshold = best_threshold;
        nodes.push_back(node);
        int left = build(samples, begin, split);
        int right = build(samples, split, end);
        nodes[node_index].left = left;
        nodes[node_index].right = right;
        return node_index;
    }
};

DecisionTree build_tree(const FeatureMatrix& X, const std::vector<std::size_t>& y,
                        std::size_t n_classes, const RandomForestConfig& config,
                        std::uint64_t tree_seed) {
    TreeBuilder builder{X, y, n_classes,
                        config.max_features > 0
                            ? config.max_features
                            : std::max(1, static_cast<int>(std::floor(
                                              std::sqrt(static_cast<double>(X.cols()))))),
                        Rng(tree_seed),
                        {},
                        std::vector<std::size_t>(X.cols())};
    std::vector<std::size_t> samples;
    samples.reserve(X.rows());
    if (config.bootstrap) {
        for (std::size_t i = 0; i < X.rows(); ++i) samples.push_back(builder.rng.index(X.rows()));
    } else {
        samples.resize(X.rows());
        std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    builder.build(samples, 0, samples.size());
    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

}  // namespace

int DecisionTree::predict_position(const double* row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& node = nodes[static_cast<std::size_t>(i)];
        i = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(i)].label;
}

TrainedClassifier train_random_forest(const FeatureMatrix& features,
                                      const std::vector<int>& labels,
                                      const RandomForestConfig& config) {
    internal::check_aligned(features, labels);
    if (config.n_trees < 1) throw std::invalid_argument("random_forest: n_trees must be >= 1");
    auto X = features.densified();
    auto classes = internal::sorted_classes(labels);
    auto y = internal::class_positions(labels, classes);

    RandomForestParams params;
    params.n_features = X.cols();
    params.trees.resize(config.n_trees);
    if (config.threads == 1) {
        for (int t = 0; t < config.n_trees; ++t) {
            params.trees[t] =
                build_tree(X, y, classes.size(), config, mix_seed(config.seed, t));
        }
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(config.threads > 0 ? config.threads : omp_get_max_threads())
        for (int t = 0; t < config.n_trees; ++t) {
            params.trees[t] =
                build_tree(X, y, classes.size(), config, mix_seed(config.seed, t));
        }
#else
        for (int t = 0; t < config.n_trees; ++t) {
            params.trees[t] =
                build_tree(X, y, classes.size(), config, mix_seed(config.seed, t));
        }
#endif
    }
    TrainedClassifier model;
    model.kind = ClassifierKind::random_forest;
    model.classes = std::move(classes);
    model.params = std::move(params);
    return model;
}

}  // namespace conseq
