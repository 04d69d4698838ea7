#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "twsp/cur.hpp"
#include "twsp/detail/eigen.hpp"
#include "twsp/linalg.hpp"
#include "twsp/matrix.hpp"
#include "twsp/rng.hpp"

namespace twsp {

/// Where a computed singular direction is matched back to an actual sample:
/// `data` matches against the normalized columns/rows of X, `residual`
/// against the columns/rows of the residual matrix itself.
enum class MatchingTarget { data, residual };

enum class MoveKind { column, row };
enum class Termination { saturated, max_iter };

inline const char* to_cstring(MatchingTarget t) {
    return t == MatchingTarget::data ? "data" : "residual";
}
inline const char* to_cstring(MoveKind m) { return m == MoveKind::column ? "column" : "row"; }
inline const char* to_cstring(Termination t) {
    return t == Termination::saturated ? "saturated" : "max_iter";
}

/**
 * Two-way spectrum pursuit configuration. Zero means "derive from k" for
 * max_iter (30 * max(k1, k2)) and saturation_window (max(k1, k2)).
 * saturation_tol = 0 disables saturation so runs always use max_iter.
 *
 * Randomness discipline (one seeded stream per restart, restart r uses
 * seed + r): initial column selection (partial Fisher-Yates over the nonzero
 * columns), then initial row selection, then the active column slot, then the
 * active row slot, then one slot redraw per accepted move, in acceptance
 * order. See Rng for the generator itself.
 */
struct SolverConfig {
    std::size_t k1 = 1;  // selected columns
    std::size_t k2 = 1;  // selected rows
    std::uint64_t seed = 0;
    std::size_t max_iter = 0;
    double saturation_tol = 1e-8;
    std::size_t saturation_window = 0;
    MatchingTarget matching_target = MatchingTarget::data;
    std::size_t restarts = 1;
};

/// Working selection: column/row index slots plus the active slot on each
/// side (the one whose occupant is up for replacement).
struct SelectionState {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    std::size_t active_col_slot = 0;
    std::size_t active_row_slot = 0;
};

struct CandidateResult {
    std::size_t index = 0;
    double error = 0.0;  // Frobenius reconstruction error of the modified selection
};

struct TraceEntry {
    std::size_t iteration = 0;
    double e_col = 0.0;  // Frobenius error of the candidate column move
    double e_row = 0.0;  // Frobenius error of the candidate row move
    MoveKind accepted = MoveKind::column;
    std::size_t accepted_index = 0;
    std::size_t replaced_slot = 0;
    double current_error = 0.0;  // normalized error after the accepted move
    double best_error = 0.0;     // best normalized error seen so far
};

struct ConvergenceTrace {
    std::vector<std::size_t> initial_cols;
    std::vector<std::size_t> initial_rows;
    double initial_error = 0.0;  // normalized error of the initial selection
    std::vector<TraceEntry> entries;
    std::size_t iterations = 0;
    Termination termination = Termination::max_iter;
};

struct SolveResult {
    CurDecomposition decomposition;
    ConvergenceTrace trace;
};

namespace detail {

inline constexpr double kZeroNormFloor = 1e-300;
inline constexpr double kExactResidualFactor = 1e-12;

struct ProblemView {
    ConstMap x;
    double fro = 0.0;
    Eigen::VectorXd col_norms;
    Eigen::VectorXd row_norms;
    std::vector<std::size_t> nonzero_cols;
    std::vector<std::size_t> nonzero_rows;
};

inline ProblemView make_problem_view(const DenseMatrix& x) {
    ProblemView pv{map_of(x), 0.0, {}, {}, {}, {}};
    pv.fro = fro_norm(x);
    pv.col_norms = pv.x.colwise().norm();
    pv.row_norms = pv.x.rowwise().norm();
    for (Eigen::Index j = 0; j < pv.col_norms.size(); ++j)
        if (pv.col_norms(j) > kZeroNormFloor) pv.nonzero_cols.push_back(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < pv.row_norms.size(); ++i)
        if (pv.row_norms(i) > kZeroNormFloor) pv.nonzero_rows.push_back(static_cast<std::size_t>(i));
    return pv;
}

inline double selection_error(const ProblemView& pv, std::span<const std::size_t> cols,
                              const Eigen::MatrixXd& x_rpinv, const Eigen::MatrixXd& r) {
    const Eigen::MatrixXd c = gather_columns(pv.x, cols);
    const Eigen::MatrixXd u = pinv(c) * x_rpinv;
    return residual_from(pv.x, c, u, r).norm();
}

/**
 * One column-side proposal. Removes the slot's column, projects X onto the
 * span of the remaining selection (E = X - C_i (C_i^+ X R^+) R), takes the
 * dominant left singular vector of E, and matches it to the admissible column
 * with the largest absolute correlation. Admissible means: not held by
 * another slot and not numerically zero; the removed column itself may win,
 * which makes the move a no-op. Ties go to the lowest index. The returned
 * error is the full CUR error of the modified selection. When E is
 * numerically zero the selection is already exact and the removed index is
 * returned with the current error.
 */
inline CandidateResult column_candidate_impl(const ProblemView& pv,
                                             const std::vector<std::size_t>& cols,
                                             const std::vector<std::size_t>& rows, std::size_t slot,
                                             MatchingTarget target) {
    const auto m = static_cast<std::size_t>(pv.x.cols());
    const std::size_t k1 = cols.size();

    const Eigen::MatrixXd r = gather_rows(pv.x, rows);
    const Eigen::MatrixXd rp = pinv(r);
    const Eigen::MatrixXd x_rp = pv.x * rp;

    Eigen::MatrixXd residual;
    if (k1 > 1) {
        const Eigen::MatrixXd c_i = gather_columns_excluding(pv.x, cols, slot);
        const Eigen::MatrixXd w = pinv(c_i) * x_rp;
        residual = residual_from(pv.x, c_i, w, r);
    } else {
        residual = pv.x;
    }

    if (residual.norm() <= kExactResidualFactor * pv.fro)
        return {cols[slot], selection_error(pv, cols, x_rp, r)};

    const LeadingTriplet trip = leading_triplet(residual);

    Eigen::VectorXd corr;
    if (target == MatchingTarget::data) {
        corr = (pv.x.transpose() * trip.u).cwiseAbs();
    } else {
        corr = (residual.transpose() * trip.u).cwiseAbs();
    }

    std::vector<char> held(m, 0);
    for (std::size_t t = 0; t < k1; ++t)
        if (t != slot) held[cols[t]] = 1;

    std::size_t best = cols[slot];
    double best_score = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (held[j] || pv.col_norms(static_cast<Eigen::Index>(j)) <= kZeroNormFloor) continue;
        const double score = target == MatchingTarget::data
                                 ? corr(static_cast<Eigen::Index>(j)) /
                                       pv.col_norms(static_cast<Eigen::Index>(j))
                                 : corr(static_cast<Eigen::Index>(j));
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }

    std::vector<std::size_t> trial(cols);
    trial[slot] = best;
    return {best, selection_error(pv, trial, x_rp, r)};
}

/// Row-side mirror of column_candidate_impl: removes the slot's row, takes
/// the dominant right singular vector of E = X - C (C^+ X R_j^+) R_j, and
/// matches over rows.
inline CandidateResult row_candidate_impl(const ProblemView& pv,
                                          const std::vector<std::size_t>& cols,
                                          const std::vector<std::size_t>& rows, std::size_t slot,
                                          MatchingTarget target) {
    const auto n = static_cast<std::size_t>(pv.x.rows());
    const std::size_t k2 = rows.size();

    const Eigen::MatrixXd c = gather_columns(pv.x, cols);
    const Eigen::MatrixXd cp = pinv(c);

    Eigen::MatrixXd residual;
    if (k2 > 1) {
        const Eigen::MatrixXd r_j = gather_rows_excluding(pv.x, rows, slot);
        const Eigen::MatrixXd y = cp * (pv.x * pinv(r_j));
        residual = residual_from(pv.x, c, y, r_j);
    } else {
        residual = pv.x;
    }

    const auto error_for = [&](std::span<const std::size_t> trial_rows) {
        const Eigen::MatrixXd r_new = gather_rows(pv.x, trial_rows);
        const Eigen::MatrixXd u = cp * (pv.x * pinv(r_new));
        return residual_from(pv.x, c, u, r_new).norm();
    };

    if (residual.norm() <= kExactResidualFactor * pv.fro) return {rows[slot], error_for(rows)};

    const LeadingTriplet trip = leading_triplet(residual);

    Eigen::VectorXd corr;
    if (target == MatchingTarget::data) {
        corr = (pv.x * trip.v).cwiseAbs();
    } else {
        corr = (residual * trip.v).cwiseAbs();
    }

    std::vector<char> held(n, 0);
    for (std::size_t t = 0; t < k2; ++t)
        if (t != slot) held[rows[t]] = 1;

    std::size_t best = rows[slot];
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (held[i] || pv.row_norms(static_cast<Eigen::Index>(i)) <= kZeroNormFloor) continue;
        const double score = target == MatchingTarget::data
                                 ? corr(static_cast<Eigen::Index>(i)) /
                                       pv.row_norms(static_cast<Eigen::Index>(i))
                                 : corr(static_cast<Eigen::Index>(i));
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }

    std::vector<std::size_t> trial(rows);
    trial[slot] = best;
    return {best, error_for(trial)};
}

inline double full_selection_error(const ProblemView& pv, std::span<const std::size_t> cols,
                                   std::span<const std::size_t> rows) {
    const Eigen::MatrixXd r = gather_rows(pv.x, rows);
    const Eigen::MatrixXd x_rp = pv.x * pinv(r);
    return selection_error(pv, cols, x_rp, r);
}

inline void validate_state(const DenseMatrix& x, const SelectionState& state) {
    check_selection(x, state.cols, state.rows);
    if (state.active_col_slot >= state.cols.size())
        throw std::invalid_argument("SelectionState: active column slot out of range");
    if (state.active_row_slot >= state.rows.size())
        throw std::invalid_argument("SelectionState: active row slot out of range");
}

inline void validate_config(const SolverConfig& cfg, const ProblemView& pv) {
    if (cfg.k1 < 1 || cfg.k2 < 1) throw std::invalid_argument("SolverConfig: k1 and k2 must be >= 1");
    if (cfg.k1 > pv.nonzero_cols.size())
        throw std::invalid_argument("SolverConfig: k1 exceeds the number of nonzero columns (" +
                                    std::to_string(pv.nonzero_cols.size()) + ")");
    if (cfg.k2 > pv.nonzero_rows.size())
        throw std::invalid_argument("SolverConfig: k2 exceeds the number of nonzero rows (" +
                                    std::to_string(pv.nonzero_rows.size()) + ")");
    if (!(cfg.saturation_tol >= 0.0) || !std::isfinite(cfg.saturation_tol))
        throw std::invalid_argument("SolverConfig: saturation_tol must be finite and >= 0");
    if (cfg.restarts < 1) throw std::invalid_argument("SolverConfig: restarts must be >= 1");
}

struct SingleRun {
    std::vector<std::size_t> best_cols;
    std::vector<std::size_t> best_rows;
    double best_error = 0.0;  // Frobenius
    ConvergenceTrace trace;
};

inline SingleRun run_twsp_once(const ProblemView& pv, const SolverConfig& cfg, std::uint64_t seed,
                               std::size_t max_iter, std::size_t window) {
    Rng rng(seed);
    std::vector<std::size_t> cols = rng.sample_without_replacement(pv.nonzero_cols, cfg.k1);
    std::vector<std::size_t> rows = rng.sample_without_replacement(pv.nonzero_rows, cfg.k2);
    std::size_t i = static_cast<std::size_t>(rng.next_index(cfg.k1));
    std::size_t j = static_cast<std::size_t>(rng.next_index(cfg.k2));

    SingleRun run;
    run.trace.initial_cols = cols;
    run.trace.initial_rows = rows;

    double best = full_selection_error(pv, cols, rows);
    run.trace.initial_error = normalized_from(best, pv.fro);
    run.best_cols = cols;
    run.best_rows = rows;

    // best_hist[t] = best Frobenius error after t iterations; [0] is initial.
    std::vector<double> best_hist{best};
    Termination term = Termination::max_iter;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const CandidateResult cand_c = column_candidate_impl(pv, cols, rows, i, cfg.matching_target);
        const CandidateResult cand_r = row_candidate_impl(pv, cols, rows, j, cfg.matching_target);

        TraceEntry entry;
        entry.iteration = it;
        entry.e_col = cand_c.error;
        entry.e_row = cand_r.error;

        double current;
        if (cand_c.error <= cand_r.error) {  // ties go to the column move
            entry.accepted = MoveKind::column;
            entry.accepted_index = cand_c.index;
            entry.replaced_slot = i;
            cols[i] = cand_c.index;
            current = cand_c.error;
            i = static_cast<std::size_t>(rng.next_index(cfg.k1));
        } else {
            entry.accepted = MoveKind::row;
            entry.accepted_index = cand_r.index;
            entry.replaced_slot = j;
            rows[j] = cand_r.index;
            current = cand_r.error;
            j = static_cast<std::size_t>(rng.next_index(cfg.k2));
        }

        if (current < best) {
            best = current;
            run.best_cols = cols;
            run.best_rows = rows;
        }

        entry.current_error = normalized_from(current, pv.fro);
        entry.best_error = normalized_from(best, pv.fro);
        run.trace.entries.push_back(entry);
        best_hist.push_back(best);

        if (best_hist.size() > window) {
            const double before = best_hist[best_hist.size() - 1 - window];
            const double improvement = before - best;
            if (improvement <
                cfg.saturation_tol * std::max(before, std::numeric_limits<double>::min())) {
                term = Termination::saturated;
                break;
            }
        }
    }

    run.best_error = best;
    run.trace.iterations = run.trace.entries.size();
    run.trace.termination = term;
    return run;
}

}  // namespace detail

/// Column-side proposal for the state's active column slot; see
/// detail::column_candidate_impl for the exact procedure.
inline CandidateResult column_candidate(const DenseMatrix& x, const SelectionState& state,
                                        const SolverConfig& cfg) {
    detail::validate_state(x, state);
    const auto pv = detail::make_problem_view(x);
    return detail::column_candidate_impl(pv, state.cols, state.rows, state.active_col_slot,
                                         cfg.matching_target);
}

/// Row-side proposal for the state's active row slot.
inline CandidateResult row_candidate(const DenseMatrix& x, const SelectionState& state,
                                     const SolverConfig& cfg) {
    detail::validate_state(x, state);
    const auto pv = detail::make_problem_view(x);
    return detail::row_candidate_impl(pv, state.cols, state.rows, state.active_row_slot,
                                      cfg.matching_target);
}

/**
 * Two-way spectrum pursuit. Starting from a seeded random selection of k1
 * nonzero columns and k2 nonzero rows, each iteration proposes one column
 * replacement and one row replacement and accepts whichever yields the
 * smaller CUR error (ties go to the column move); the accepted side then
 * redraws its active slot. Acceptance is unconditional, so the current error
 * may fluctuate; the returned decomposition is the best selection seen, with
 * its least-squares core. Iterations stop when the best error has improved by
 * less than saturation_tol (relative) over the saturation window, or at
 * max_iter. With restarts > 1, independent runs are made with seeds
 * seed, seed + 1, ... and the best result wins (ties to the earliest
 * restart); the returned trace is the winning run's.
 */
inline SolveResult solve(const DenseMatrix& x, const SolverConfig& cfg) {
    if (x.empty()) throw std::invalid_argument("solve: empty matrix");
    const auto pv = detail::make_problem_view(x);
    detail::validate_config(cfg, pv);

    const std::size_t k_max = std::max(cfg.k1, cfg.k2);
    const std::size_t max_iter = cfg.max_iter > 0 ? cfg.max_iter : 30 * k_max;
    const std::size_t window = cfg.saturation_window > 0 ? cfg.saturation_window : k_max;

    detail::SingleRun winner;
    bool have_winner = false;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        detail::SingleRun run = detail::run_twsp_once(pv, cfg, cfg.seed + r, max_iter, window);
        if (!have_winner || run.best_error < winner.best_error) {
            winner = std::move(run);
            have_winner = true;
        }
    }

    SolveResult result;
    result.decomposition.col_indices = winner.best_cols;
    result.decomposition.row_indices = winner.best_rows;
    result.decomposition.core = core_matrix(x, winner.best_cols, winner.best_rows);
    result.trace = std::move(winner.trace);
    return result;
}

}  // namespace twsp
