#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twsp {

/// Dense 2-D array of 64-bit floats in row-major order; the single carrier
/// type for data matrices and everything derived from them (selected
/// columns/rows, residuals, core matrices). Construction from explicit data
/// rejects NaN/Inf entries.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    /// Takes ownership of row-major data. Throws std::invalid_argument on a
    /// length mismatch or any non-finite entry.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                                        " values, got " + std::to_string(data_.size()));
        }
        for (double v : data_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("DenseMatrix: non-finite entry");
            }
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Row-by-row literal, mostly for small fixtures.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t n = rows.size();
        const std::size_t m = n == 0 ? 0 : rows.begin()->size();
        std::vector<double> data;
        data.reserve(n * m);
        for (const auto& row : rows) {
            if (row.size() != m) throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
            data.insert(data.end(), row.begin(), row.end());
        }
        return DenseMatrix(n, m, std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Frobenius norm, accumulated in extended precision.
inline double fro_norm(const DenseMatrix& a) {
    long double acc = 0.0L;
    for (double v : a.data()) acc += static_cast<long double>(v) * v;
    return static_cast<double>(std::sqrt(acc));
}

/// Copy of the listed columns, in the given order. Duplicates are allowed
/// here; selection-level distinctness is enforced by the CUR operations.
inline DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> idx) {
    DenseMatrix out(x.rows(), idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] >= x.cols())
            throw std::out_of_range("select_columns: index " + std::to_string(idx[t]) + " out of range");
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, t) = x(i, idx[t]);
    }
    return out;
}

inline DenseMatrix select_rows(const DenseMatrix& x, std::span<const std::size_t> idx) {
    DenseMatrix out(idx.size(), x.cols());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] >= x.rows())
            throw std::out_of_range("select_rows: index " + std::to_string(idx[t]) + " out of range");
        for (std::size_t j = 0; j < x.cols(); ++j) out(t, j) = x(idx[t], j);
    }
    return out;
}

/// Side-by-side concatenation; row counts must agree.
inline DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("hstack: row counts differ");
    DenseMatrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

}  // namespace twsp
