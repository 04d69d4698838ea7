#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsp/cur.hpp"
#include "twsp/detail/eigen.hpp"
#include "twsp/matrix.hpp"
#include "twsp/rng.hpp"
#include "twsp/solver.hpp"

namespace twsp {

/// Comparison selectors available to the benchmark harness.
enum class Baseline { sp_independent, leverage, random, brute_force };

struct SpRun {
    std::vector<std::size_t> indices;
    std::size_t iterations = 0;
    Termination termination = Termination::max_iter;
};

namespace detail {

inline double column_projection_error(const ProblemView& pv, std::span<const std::size_t> sel) {
    Eigen::MatrixXd u = gather_columns(pv.x, sel);
    for (Eigen::Index t = 0; t < u.cols(); ++t) u.col(t) /= u.col(t).norm();
    const Eigen::MatrixXd coeff = pinv(u) * pv.x;
    return (pv.x - u * coeff).norm();
}

}  // namespace detail

/**
 * One-way spectrum pursuit over columns. Starting from a seeded random
 * selection of k nonzero columns, slots are revisited cyclically (slot =
 * iteration mod k): the slot's column is removed, X is projected onto the
 * orthogonal complement of the remaining selected columns (normalized before
 * projection), the dominant left singular vector of the residual is computed
 * and matched to the admissible column with the largest absolute correlation
 * (against residual columns by default, or against normalized data columns).
 * Stops when the best column-projection error ||X - P_C X||_F has improved by
 * less than saturation_tol (relative) over `window` iterations, or at
 * max_iter. Zeros for max_iter/window mean 30*k and k. Returns the final
 * selection in slot order.
 */
inline SpRun sp_select_traced(const DenseMatrix& x, std::size_t k, std::uint64_t seed,
                              std::size_t max_iter = 0,
                              MatchingTarget target = MatchingTarget::residual,
                              double saturation_tol = 1e-8, std::size_t window = 0) {
    if (x.empty()) throw std::invalid_argument("sp_select: empty matrix");
    const auto pv = detail::make_problem_view(x);
    if (k < 1 || k > pv.nonzero_cols.size())
        throw std::invalid_argument("sp_select: k must be in [1, nonzero columns]");
    if (!(saturation_tol >= 0.0)) throw std::invalid_argument("sp_select: bad saturation_tol");

    const std::size_t iters_cap = max_iter > 0 ? max_iter : 30 * k;
    const std::size_t win = window > 0 ? window : k;
    const auto m = static_cast<std::size_t>(pv.x.cols());

    Rng rng(seed);
    std::vector<std::size_t> sel = rng.sample_without_replacement(pv.nonzero_cols, k);

    double best = detail::column_projection_error(pv, sel);
    std::vector<double> best_hist{best};

    SpRun run;
    run.termination = Termination::max_iter;
    std::size_t done = 0;
    for (std::size_t it = 0; it < iters_cap; ++it) {
        const std::size_t slot = it % k;

        Eigen::MatrixXd residual;
        if (k > 1) {
            Eigen::MatrixXd u = detail::gather_columns_excluding(pv.x, sel, slot);
            for (Eigen::Index t = 0; t < u.cols(); ++t) u.col(t) /= u.col(t).norm();
            residual = pv.x - u * (detail::pinv(u) * pv.x);
        } else {
            residual = pv.x;
        }

        done = it + 1;
        if (residual.norm() <= detail::kExactResidualFactor * pv.fro) {
            run.termination = Termination::saturated;
            break;
        }

        const detail::LeadingTriplet trip = detail::leading_triplet(residual);
        Eigen::VectorXd corr;
        if (target == MatchingTarget::data) {
            corr = (pv.x.transpose() * trip.u).cwiseAbs();
        } else {
            corr = (residual.transpose() * trip.u).cwiseAbs();
        }

        std::vector<char> held(m, 0);
        for (std::size_t t = 0; t < k; ++t)
            if (t != slot) held[sel[t]] = 1;

        std::size_t pick = sel[slot];
        double best_score = -1.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (held[j] || pv.col_norms(static_cast<Eigen::Index>(j)) <= detail::kZeroNormFloor)
                continue;
            const double score = target == MatchingTarget::data
                                     ? corr(static_cast<Eigen::Index>(j)) /
                                           pv.col_norms(static_cast<Eigen::Index>(j))
                                     : corr(static_cast<Eigen::Index>(j));
            if (score > best_score) {
                best_score = score;
                pick = j;
            }
        }
        sel[slot] = pick;

        const double current = detail::column_projection_error(pv, sel);
        best = std::min(best, current);
        best_hist.push_back(best);
        if (best_hist.size() > win) {
            const double before = best_hist[best_hist.size() - 1 - win];
            if (before - best <
                saturation_tol * std::max(before, std::numeric_limits<double>::min())) {
                run.termination = Termination::saturated;
                break;
            }
        }
    }
    run.indices = std::move(sel);
    run.iterations = done;
    return run;
}

inline std::vector<std::size_t> sp_select(const DenseMatrix& x, std::size_t k, std::uint64_t seed,
                                          std::size_t max_iter = 0,
                                          MatchingTarget target = MatchingTarget::residual,
                                          double saturation_tol = 1e-8, std::size_t window = 0) {
    return sp_select_traced(x, k, seed, max_iter, target, saturation_tol, window).indices;
}

/// SP applied independently to X (columns, stream `seed`) and X^T (rows,
/// stream `seed + 1`), coupled by the least-squares core.
inline CurDecomposition sp_independent_cur(const DenseMatrix& x, std::size_t k1, std::size_t k2,
                                           std::uint64_t seed, std::size_t max_iter = 0,
                                           MatchingTarget target = MatchingTarget::residual,
                                           double saturation_tol = 1e-8, std::size_t window = 0) {
    auto cols = sp_select(x, k1, seed, max_iter, target, saturation_tol, window);
    const DenseMatrix xt = x.transposed();
    auto rows = sp_select(xt, k2, seed + 1, max_iter, target, saturation_tol, window);
    DenseMatrix core = core_matrix(x, cols, rows);
    return {std::move(cols), std::move(rows), std::move(core)};
}

struct LeverageScores {
    std::vector<double> col_probs;
    std::vector<double> row_probs;
};

/// Rank-r leverage scores: col_probs[j] = ||V_r(j, :)||^2 / r from the top-r
/// right singular vectors, row_probs from the top-r left singular vectors.
/// Each vector is a probability distribution (sums to 1).
inline LeverageScores leverage_scores(const DenseMatrix& x, std::size_t target_rank) {
    if (x.empty()) throw std::invalid_argument("leverage_scores: empty matrix");
    if (target_rank < 1 || target_rank > std::min(x.rows(), x.cols()))
        throw std::invalid_argument("leverage_scores: target rank must be in [1, min(N, M)]");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::to_eigen(x),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto r = static_cast<Eigen::Index>(target_rank);
    LeverageScores scores;
    scores.col_probs.resize(x.cols());
    scores.row_probs.resize(x.rows());
    for (std::size_t j = 0; j < x.cols(); ++j)
        scores.col_probs[j] =
            svd.matrixV().row(static_cast<Eigen::Index>(j)).head(r).squaredNorm() / target_rank;
    for (std::size_t i = 0; i < x.rows(); ++i)
        scores.row_probs[i] =
            svd.matrixU().row(static_cast<Eigen::Index>(i)).head(r).squaredNorm() / target_rank;
    return scores;
}

namespace detail {

// Sequential renormalized draws without replacement. If the remaining mass
// underflows, the rest of the picks fall back to uniform over the untaken
// indices (ascending scan order either way, so draws are reproducible).
inline std::vector<std::size_t> weighted_sample_without_replacement(Rng& rng,
                                                                    std::vector<double> weights,
                                                                    std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::vector<char> taken(weights.size(), 0);
    for (std::size_t t = 0; t < k; ++t) {
        double total = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j)
            if (!taken[j]) total += weights[j];

        std::size_t pick = weights.size();
        if (total <= kZeroNormFloor) {
            std::vector<std::size_t> untaken;
            for (std::size_t j = 0; j < weights.size(); ++j)
                if (!taken[j]) untaken.push_back(j);
            pick = untaken[static_cast<std::size_t>(rng.next_index(untaken.size()))];
        } else {
            const double d = rng.next_unit() * total;
            double acc = 0.0;
            std::size_t last = weights.size();
            for (std::size_t j = 0; j < weights.size(); ++j) {
                if (taken[j]) continue;
                last = j;
                acc += weights[j];
                if (acc > d) {
                    pick = j;
                    break;
                }
            }
            if (pick == weights.size()) pick = last;  // rounding left acc <= d
        }
        taken[pick] = 1;
        out.push_back(pick);
    }
    return out;
}

}  // namespace detail

/// k1 columns and k2 rows sampled without replacement proportionally to
/// rank-r leverage scores (columns drawn first), coupled by the core.
inline CurDecomposition leverage_cur(const DenseMatrix& x, std::size_t k1, std::size_t k2,
                                     std::size_t target_rank, std::uint64_t seed) {
    if (x.empty()) throw std::invalid_argument("leverage_cur: empty matrix");
    if (k1 < 1 || k1 > x.cols() || k2 < 1 || k2 > x.rows())
        throw std::invalid_argument("leverage_cur: selection sizes out of range");
    const LeverageScores scores = leverage_scores(x, target_rank);
    Rng rng(seed);
    auto cols = detail::weighted_sample_without_replacement(rng, scores.col_probs, k1);
    auto rows = detail::weighted_sample_without_replacement(rng, scores.row_probs, k2);
    DenseMatrix core = core_matrix(x, cols, rows);
    return {std::move(cols), std::move(rows), std::move(core)};
}

/// Uniform selection without replacement over the nonzero columns/rows
/// (columns drawn first), coupled by the core.
inline CurDecomposition random_cur(const DenseMatrix& x, std::size_t k1, std::size_t k2,
                                   std::uint64_t seed) {
    if (x.empty()) throw std::invalid_argument("random_cur: empty matrix");
    const auto pv = detail::make_problem_view(x);
    if (k1 < 1 || k1 > pv.nonzero_cols.size())
        throw std::invalid_argument("random_cur: k1 must be in [1, nonzero columns]");
    if (k2 < 1 || k2 > pv.nonzero_rows.size())
        throw std::invalid_argument("random_cur: k2 must be in [1, nonzero rows]");
    Rng rng(seed);
    auto cols = rng.sample_without_replacement(pv.nonzero_cols, k1);
    auto rows = rng.sample_without_replacement(pv.nonzero_rows, k2);
    DenseMatrix core = core_matrix(x, cols, rows);
    return {std::move(cols), std::move(rows), std::move(core)};
}

struct BruteForceResult {
    CurDecomposition decomposition;
    double error = 0.0;  // Frobenius
};

namespace detail {

inline double n_choose_k(std::size_t n, std::size_t k) {
    double res = 1.0;
    for (std::size_t i = 0; i < k; ++i) res *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return res;
}

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] != i + n - k) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Exhaustive minimizer of the CUR reconstruction error over all
/// (k1-column, k2-row) index pairs, in lexicographic order so ties resolve to
/// the smallest (cols, then rows). Guarded: refuses when
/// C(M, k1) * C(N, k2) exceeds 10^6.
inline BruteForceResult brute_force_cur(const DenseMatrix& x, std::size_t k1, std::size_t k2) {
    if (x.empty()) throw std::invalid_argument("brute_force_cur: empty matrix");
    if (k1 < 1 || k1 > x.cols() || k2 < 1 || k2 > x.rows())
        throw std::invalid_argument("brute_force_cur: selection sizes out of range");
    const double combos = detail::n_choose_k(x.cols(), k1) * detail::n_choose_k(x.rows(), k2);
    if (!(combos <= 1e6))
        throw std::length_error("brute_force_cur: C(M,k1)*C(N,k2) = " + std::to_string(combos) +
                                " exceeds the 1e6 guard");

    std::vector<std::size_t> cols(k1), best_cols, best_rows;
    for (std::size_t i = 0; i < k1; ++i) cols[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::size_t> rows(k2);
        for (std::size_t i = 0; i < k2; ++i) rows[i] = i;
        do {
            const double e = reconstruction_error(x, cols, rows);
            if (e < best) {
                best = e;
                best_cols = cols;
                best_rows = rows;
            }
        } while (detail::next_combination(rows, x.rows()));
    } while (detail::next_combination(cols, x.cols()));

    DenseMatrix core = core_matrix(x, best_cols, best_rows);
    return {{std::move(best_cols), std::move(best_rows), std::move(core)}, best};
}

inline const char* to_cstring(Baseline b) {
    switch (b) {
        case Baseline::sp_independent: return "sp";
        case Baseline::leverage: return "leverage";
        case Baseline::random: return "random";
        case Baseline::brute_force: return "brute";
    }
    return "?";
}

}  // namespace twsp
