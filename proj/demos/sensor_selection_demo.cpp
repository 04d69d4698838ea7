// Selects a joint subset of columns and rows from a synthetic low-rank
// matrix, compares two-way spectrum pursuit against the baselines, and prints
// a per-sensor channel assignment read off the core matrix.

#include <cstdio>

#include <twsp/twsp.hpp>

int main() {
    using namespace twsp;

    const SynthSpec spec{/*n=*/60, /*m=*/32, /*rank=*/6,
                         /*noise_sigma=*/noise_sigma_for_ratio(6, 0.1), /*seed=*/7};
    const DenseMatrix x = low_rank_plus_noise(spec);

    SolverConfig cfg;
    cfg.k1 = 8;   // columns (channels)
    cfg.k2 = 10;  // rows (sensing locations)
    cfg.seed = 1;

    const SolveResult result = solve(x, cfg);
    const double twsp_err = normalized_error(x, result.decomposition.col_indices,
                                             result.decomposition.row_indices);

    const CurDecomposition sp = sp_independent_cur(x, cfg.k1, cfg.k2, cfg.seed);
    const CurDecomposition lev = leverage_cur(x, cfg.k1, cfg.k2, /*target_rank=*/8, cfg.seed);
    const CurDecomposition rnd = random_cur(x, cfg.k1, cfg.k2, cfg.seed);

    std::printf("normalized CUR error on a %zux%zu rank-%zu matrix (k1=%zu, k2=%zu)\n", spec.n,
                spec.m, spec.rank, cfg.k1, cfg.k2);
    std::printf("  twsp      %.6f  (%zu iterations, %s)\n", twsp_err, result.trace.iterations,
                to_cstring(result.trace.termination));
    std::printf("  sp        %.6f\n", normalized_error(x, sp.col_indices, sp.row_indices));
    std::printf("  leverage  %.6f\n", normalized_error(x, lev.col_indices, lev.row_indices));
    std::printf("  random    %.6f\n", normalized_error(x, rnd.col_indices, rnd.row_indices));

    // Rows of the transposed core correspond to selected rows of x, columns
    // to selected columns; each location keeps its three strongest channels.
    const ChannelAssignment assignment =
        assign_top_f(result.decomposition.core.transposed(), /*f=*/3,
                     result.decomposition.row_indices, result.decomposition.col_indices);
    std::printf("\ntop-3 channels per selected location\n");
    for (const RowAssignment& row : assignment.rows) {
        std::printf("  location %2zu:", row.row);
        for (const ChannelPick& pick : row.picks)
            std::printf("  ch %2zu (%+.3f)", pick.channel, pick.value);
        std::printf("\n");
    }
    return 0;
}
