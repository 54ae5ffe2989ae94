#include "conseq/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace conseq {

FeatureMatrix FeatureMatrix::from_dense(std::size_t rows, std::size_t cols,
                                        std::vector<double> data) {
    if (data.size() != rows * cols) {
        throw std::invalid_argument("FeatureMatrix: dense data size does not match shape");
    }
    FeatureMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.sparse_ = false;
    m.dense_ = std::move(data);
    return m;
}

FeatureMatrix FeatureMatrix::from_sparse(std::vector<SparseVector> rows, std::size_t cols) {
    for (const auto& r : rows) {
        if (!r.indices.empty() && r.indices.back() >= cols) {
            throw std::invalid_argument("FeatureMatrix: sparse index out of range");
        }
    }
    FeatureMatrix m;
    m.rows_ = rows.size();
    m.cols_ = cols;
    m.sparse_ = true;
    m.sparse_rows_ = std::move(rows);
    return m;
}

double FeatureMatrix::at(std::size_t row, std::size_t col) const {
    if (!sparse_) return dense_[row * cols_ + col];
    const auto& r = sparse_rows_[row];
    auto it = std::lower_bound(r.indices.begin(), r.indices.end(), col);
    if (it == r.indices.end() || *it != col) return 0.0;
    return r.values[static_cast<std::size_t>(it - r.indices.begin())];
}

double FeatureMatrix::dot_row(std::size_t row, const double* w) const {
    double sum = 0.0;
    for_each_entry(row, [&](std::size_t c, double v) { sum += v * w[c]; });
    return sum;
}

void FeatureMatrix::add_row_scaled(std::size_t row, double scale, double* acc) const {
    for_each_entry(row, [&](std::size_t c, double v) { acc[c] += scale * v; });
}

double FeatureMatrix::row_squared_norm(std::size_t row) const {
    double sum = 0.0;
    for_each_entry(row, [&](std::size_t, double v) { sum += v * v; });
    return sum;
}

std::vector<double> FeatureMatrix::row_copy(std::size_t row) const {
    std::vector<double> out(cols_, 0.0);
    for_each_entry(row, [&](std::size_t c, double v) { out[c] = v; });
    return out;
}

FeatureMatrix FeatureMatrix::densified() const {
    if (!sparse_) return *this;
    std::vector<double> data(rows_ * cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto& r = sparse_rows_[i];
        for (std::size_t k = 0; k < r.indices.size(); ++k) {
            data[i * cols_ + r.indices[k]] = r.values[k];
        }
    }
    return from_dense(rows_, cols_, std::move(data));
}

double FeatureMatrix::min_value() const {
    double lo = 0.0;
    bool dense_full = !sparse_;
    if (dense_full && rows_ * cols_ > 0) lo = dense_[0];
    for (std::size_t i = 0; i < rows_; ++i) {
        for_each_entry(i, [&](std::size_t, double v) { lo = std::min(lo, v); });
    }
    return lo;
}

}  // namespace conseq
