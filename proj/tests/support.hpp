#pragma once

// Shared fixtures and independent oracles for the test suites. The helpers
// here deliberately avoid the library's Eigen-backed paths (naive loops only)
// so that cross-checks exercise two genuinely different routes.

#include <cmath>
#include <cstdint>
#include <vector>

#include <twsp/matrix.hpp>
#include <twsp/rng.hpp>

namespace test_support {

inline twsp::DenseMatrix gaussian_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
    twsp::Rng rng(seed);
    std::vector<double> data(n * m);
    for (double& v : data) v = rng.next_gaussian();
    return twsp::DenseMatrix(n, m, std::move(data));
}

/// Rank-r matrix A*B^T from two seeded Gaussian factors, multiplied naively.
inline twsp::DenseMatrix rank_k_matrix(std::size_t n, std::size_t m, std::size_t r,
                                       std::uint64_t seed) {
    const twsp::DenseMatrix a = gaussian_matrix(n, r, seed);
    const twsp::DenseMatrix b = gaussian_matrix(m, r, seed + 1);
    twsp::DenseMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < r; ++t) s += a(i, t) * b(j, t);
            x(i, j) = s;
        }
    return x;
}

inline twsp::DenseMatrix naive_matmul(const twsp::DenseMatrix& a, const twsp::DenseMatrix& b) {
    twsp::DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(t, j);
            c(i, j) = s;
        }
    return c;
}

inline double naive_fro(const twsp::DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

inline double max_abs_diff(const twsp::DenseMatrix& a, const twsp::DenseMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        d = std::max(d, std::fabs(a.data()[i] - b.data()[i]));
    return d;
}

inline twsp::DenseMatrix subtract(const twsp::DenseMatrix& a, const twsp::DenseMatrix& b) {
    twsp::DenseMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
    return c;
}

/// Sum of squared singular values beyond the first k (0-based tail), i.e. the
/// squared Frobenius error of the best rank-k approximation.
inline double tail_energy(const std::vector<double>& singular_values, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = k; i < singular_values.size(); ++i)
        s += singular_values[i] * singular_values[i];
    return s;
}

}  // namespace test_support
