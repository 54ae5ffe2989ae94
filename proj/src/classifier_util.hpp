#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "conseq/features.hpp"

namespace conseq::internal {

inline std::vector<int> sorted_classes(const std::vector<int>& labels) {
    std::vector<int> classes(labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

inline std::vector<std::size_t> class_positions(const std::vector<int>& labels,
                                                const std::vector<int>& classes) {
    std::vector<std::size_t> pos(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::lower_bound(classes.begin(), classes.end(), labels[i]);
        pos[i] = static_cast<std::size_t>(it - classes.begin());
    }
    return pos;
}

inline void check_aligned(const FeatureMatrix& features, const std::vector<int>& labels) {
    if (features.rows() == 0) throw std::invalid_argument("training requires at least one row");
    if (features.rows() != labels.size()) {
        throw std::invalid_argument("labels must align with feature rows");
    }
}

/// argmax with ties resolved to the first (lowest) position.
inline std::size_t argmax_first(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

}  // namespace conseq::internal
