#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "twsp/detail/eigen.hpp"
#include "twsp/matrix.hpp"
#include "twsp/rng.hpp"

namespace twsp {

/// Recipe for a seeded low-rank-plus-noise matrix.
struct SynthSpec {
    std::size_t n = 0;        // rows
    std::size_t m = 0;        // cols
    std::size_t rank = 0;     // intrinsic rank
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Noise level giving an expected noise-to-signal Frobenius ratio:
/// E||A B^T||_F^2 = n*m*rank and E||sigma G||_F^2 = n*m*sigma^2, so
/// sigma = ratio * sqrt(rank).
inline double noise_sigma_for_ratio(std::size_t rank, double ratio) {
    return ratio * std::sqrt(static_cast<double>(rank));
}

/**
 * X = A B^T + noise_sigma * G with A (n x rank), B (m x rank) and G (n x m)
 * filled with independent standard normal draws from the seeded stream.
 * Draw order: A row-major, then B row-major, then G row-major; the noise
 * block is skipped entirely when noise_sigma == 0. Variates come from
 * Rng::next_gaussian (documented Box-Muller pairing), so a spec reproduces
 * the same matrix on every run.
 */
inline DenseMatrix low_rank_plus_noise(const SynthSpec& spec) {
    if (spec.n == 0 || spec.m == 0) throw std::invalid_argument("low_rank_plus_noise: empty shape");
    if (spec.rank < 1 || spec.rank > std::min(spec.n, spec.m))
        throw std::invalid_argument("low_rank_plus_noise: rank must be in [1, min(n, m)]");
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma))
        throw std::invalid_argument("low_rank_plus_noise: noise_sigma must be finite and >= 0");

    Rng rng(spec.seed);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto m = static_cast<Eigen::Index>(spec.m);
    const auto r = static_cast<Eigen::Index>(spec.rank);

    Eigen::MatrixXd a(n, r);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < r; ++j) a(i, j) = rng.next_gaussian();
    Eigen::MatrixXd b(m, r);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < r; ++j) b(i, j) = rng.next_gaussian();

    Eigen::MatrixXd x = a * b.transpose();
    if (spec.noise_sigma > 0.0) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j) x(i, j) += spec.noise_sigma * rng.next_gaussian();
    }
    return detail::to_dense(x);
}

}  // namespace twsp
