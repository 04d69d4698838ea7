#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsp/detail/eigen.hpp"
#include "twsp/linalg.hpp"
#include "twsp/matrix.hpp"

namespace twsp {

/// A CUR decomposition of some matrix X: selected column indices (C), selected
/// row indices (R), and the least-squares core U coupling them, so that
/// X ~ X(:, col_indices) * core * X(row_indices, :). All indices are 0-based.
struct CurDecomposition {
    std::vector<std::size_t> col_indices;
    std::vector<std::size_t> row_indices;
    DenseMatrix core;  // |col_indices| x |row_indices|
};

namespace detail {

inline void check_index_list(std::span<const std::size_t> idx, std::size_t bound, const char* what) {
    if (idx.empty()) throw std::invalid_argument(std::string(what) + " selection must be non-empty");
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] >= bound)
            throw std::out_of_range(std::string(what) + " index " + std::to_string(idx[t]) +
                                    " out of range");
        for (std::size_t s = t + 1; s < idx.size(); ++s) {
            if (idx[s] == idx[t])
                throw std::out_of_range(std::string("duplicate ") + what + " index " +
                                        std::to_string(idx[t]));
        }
    }
}

inline void check_selection(const DenseMatrix& x, std::span<const std::size_t> cols,
                            std::span<const std::size_t> rows) {
    if (x.empty()) throw std::invalid_argument("CUR: empty matrix");
    check_index_list(cols, x.cols(), "column");
    check_index_list(rows, x.rows(), "row");
}

// Canonical core formula: U = pinv(C) * (X * pinv(R)). The same association
// is used everywhere errors are recomputed so the paths agree closely.
inline Eigen::MatrixXd core_from(const ConstMap& x, const Eigen::MatrixXd& c,
                                 const Eigen::MatrixXd& r) {
    return pinv(c) * (x * pinv(r));
}

inline Eigen::MatrixXd residual_from(const ConstMap& x, const Eigen::MatrixXd& c,
                                     const Eigen::MatrixXd& u, const Eigen::MatrixXd& r) {
    return x - c * (u * r);
}

inline double normalized_from(double error, double fro) {
    const double q = error / fro;
    return q * q;
}

}  // namespace detail

/// Least-squares core U = C^+ X R^+ for the given selection; U minimizes
/// ||X - C U R||_F over all K1 x K2 matrices. Pseudo-inverses use the
/// automatic rank cutoff, so linearly dependent selections degrade gracefully
/// rather than failing.
inline DenseMatrix core_matrix(const DenseMatrix& x, std::span<const std::size_t> cols,
                               std::span<const std::size_t> rows) {
    detail::check_selection(x, cols, rows);
    const auto xm = detail::map_of(x);
    const Eigen::MatrixXd c = detail::gather_columns(xm, cols);
    const Eigen::MatrixXd r = detail::gather_rows(xm, rows);
    return detail::to_dense(detail::core_from(xm, c, r));
}

/// ||X - C U R||_F with U the least-squares core for this selection.
inline double reconstruction_error(const DenseMatrix& x, std::span<const std::size_t> cols,
                                   std::span<const std::size_t> rows) {
    detail::check_selection(x, cols, rows);
    const auto xm = detail::map_of(x);
    const Eigen::MatrixXd c = detail::gather_columns(xm, cols);
    const Eigen::MatrixXd r = detail::gather_rows(xm, rows);
    const Eigen::MatrixXd u = detail::core_from(xm, c, r);
    return detail::residual_from(xm, c, u, r).norm();
}

/// reconstruction_error^2 / ||X||_F^2, in [0, 1] up to rounding.
inline double normalized_error(const DenseMatrix& x, std::span<const std::size_t> cols,
                               std::span<const std::size_t> rows) {
    const double fro = fro_norm(x);
    if (fro == 0.0) throw std::domain_error("normalized_error: zero matrix");
    return detail::normalized_from(reconstruction_error(x, cols, rows), fro);
}

/// C * core * R with X's dimensions.
inline DenseMatrix reconstruct(const DenseMatrix& x, const CurDecomposition& dec) {
    detail::check_selection(x, dec.col_indices, dec.row_indices);
    if (dec.core.rows() != dec.col_indices.size() || dec.core.cols() != dec.row_indices.size())
        throw std::invalid_argument("reconstruct: core shape does not match the selection");
    const auto xm = detail::map_of(x);
    const Eigen::MatrixXd c = detail::gather_columns(xm, dec.col_indices);
    const Eigen::MatrixXd r = detail::gather_rows(xm, dec.row_indices);
    const Eigen::MatrixXd u = detail::map_of(dec.core);
    return detail::to_dense(c * (u * r));
}

}  // namespace twsp
