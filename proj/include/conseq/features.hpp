#pragma once

#include <cstddef>
#include <vector>

#include "conseq/tfidf.hpp"

namespace conseq {

/// Sample-by-feature matrix in either sparse-row or dense row-major form.
/// All rows share one dimensionality. Trainers that need dense input
/// densify internally; the dataset scale keeps that cheap.
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    static FeatureMatrix from_dense(std::size_t rows, std::size_t cols,
                                    std::vector<double> data);
    static FeatureMatrix from_sparse(std::vector<SparseVector> rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_sparse() const { return sparse_; }

    double at(std::size_t row, std::size_t col) const;

    /// Row dot product with a dense weight vector of length cols().
    double dot_row(std::size_t row, const double* w) const;

    /// acc += scale * row, acc of length cols().
    void add_row_scaled(std::size_t row, double scale, double* acc) const;

    double row_squared_norm(std::size_t row) const;

    /// Calls fn(col, value) for each structurally stored entry of the row.
    template <typename Fn>
    void for_each_entry(std::size_t row, Fn&& fn) const {
        if (sparse_) {
            const auto& r = sparse_rows_[row];
            for (std::size_t k = 0; k < r.indices.size(); ++k) fn(r.indices[k], r.values[k]);
        } else {
            const double* r = dense_.data() + row * cols_;
            for (std::size_t c = 0; c < cols_; ++c) fn(c, r[c]);
        }
    }

    /// Dense copy of one row.
    std::vector<double> row_copy(std::size_t row) const;

    FeatureMatrix densified() const;

    /// Dense storage pointer; only valid when !is_sparse().
    const double* dense_data() const { return dense_.data(); }

    double min_value() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    bool sparse_ = false;
    std::vector<double> dense_;
    std::vector<SparseVector> sparse_rows_;
};

}  // namespace conseq
