#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <twsp/baselines.hpp>
#include <twsp/cur.hpp>
#include <twsp/linalg.hpp>
#include <twsp/solver.hpp>
#include <twsp/synth.hpp>

#include "support.hpp"

using twsp::DenseMatrix;
using namespace test_support;

namespace {

double column_projection_error(const DenseMatrix& x, std::span<const std::size_t> sel) {
    const DenseMatrix c = twsp::select_columns(x, sel);
    const DenseMatrix p = naive_matmul(c, twsp::pseudo_inverse(c));
    return naive_fro(subtract(x, naive_matmul(p, x)));
}

void check_distinct_in_range(const std::vector<std::size_t>& idx, std::size_t bound) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        REQUIRE(idx[i] < bound);
        for (std::size_t j = i + 1; j < idx.size(); ++j) REQUIRE(idx[i] != idx[j]);
    }
}

}  // namespace

TEST_CASE("sp_select on a rank-1 matrix ties to the lowest nonzero column") {
    const DenseMatrix x = DenseMatrix::from_rows({{0.0, 3.0, 6.0, 12.0}, {0.0, 4.0, 8.0, 16.0}});
    // With every candidate column parallel, the post-matching selection is
    // exact regardless of the seeded start, and matching ties resolve low.
    const auto sel = twsp::sp_select(x, 1, /*seed=*/0);
    REQUIRE(sel.size() == 1);
    CHECK(column_projection_error(x, sel) <= 1e-10 * twsp::fro_norm(x));

    const auto run = twsp::sp_select_traced(x, 1, 0);
    CHECK(run.termination == twsp::Termination::saturated);
}

TEST_CASE("sp_select captures the column space of a noiseless rank-2 matrix") {
    const DenseMatrix x = rank_k_matrix(20, 15, 2, 19);
    const auto sel = twsp::sp_select(x, 2, /*seed=*/1);
    check_distinct_in_range(sel, x.cols());
    CHECK(column_projection_error(x, sel) <= 1e-8 * twsp::fro_norm(x));
}

TEST_CASE("sp_select is deterministic and validates inputs") {
    const DenseMatrix x = gaussian_matrix(8, 10, 2);
    CHECK(twsp::sp_select(x, 3, 7) == twsp::sp_select(x, 3, 7));
    CHECK_THROWS_AS(twsp::sp_select(x, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(twsp::sp_select(x, 11, 1), std::invalid_argument);
    CHECK_THROWS_AS(twsp::sp_select(DenseMatrix(), 1, 1), std::invalid_argument);
}

TEST_CASE("sp_independent_cur composes two one-way runs") {
    const DenseMatrix r1 = rank_k_matrix(7, 9, 1, 5);
    const auto dec = twsp::sp_independent_cur(r1, 1, 1, 3);
    CHECK(twsp::normalized_error(r1, dec.col_indices, dec.row_indices) <= 1e-10);

    const DenseMatrix x = twsp::low_rank_plus_noise({12, 14, 3, 0.2, 9});
    const auto d = twsp::sp_independent_cur(x, 3, 3, 4);
    check_distinct_in_range(d.col_indices, x.cols());
    check_distinct_in_range(d.row_indices, x.rows());
    // Emitted core is the least-squares core of the emitted indices.
    CHECK(max_abs_diff(d.core, twsp::core_matrix(x, d.col_indices, d.row_indices)) <= 1e-10);
}

TEST_CASE("leverage_scores analytic cases and normalization") {
    const auto eye = twsp::leverage_scores(DenseMatrix::identity(4), 4);
    for (double p : eye.col_probs) CHECK(std::fabs(p - 0.25) <= 1e-12);
    for (double p : eye.row_probs) CHECK(std::fabs(p - 0.25) <= 1e-12);

    // Rank-1 outer(c, r): column scores proportional to r entries squared.
    const std::vector<double> cvec{1.0, -2.0};
    const std::vector<double> rvec{3.0, 0.0, -1.0};
    DenseMatrix x(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = cvec[i] * rvec[j];
    const auto s = twsp::leverage_scores(x, 1);
    const double rnorm2 = 9.0 + 0.0 + 1.0;
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::fabs(s.col_probs[j] - rvec[j] * rvec[j] / rnorm2) <= 1e-12);
    const double cnorm2 = 1.0 + 4.0;
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::fabs(s.row_probs[i] - cvec[i] * cvec[i] / cnorm2) <= 1e-12);

    const DenseMatrix a = gaussian_matrix(6, 9, 13);
    const auto sa = twsp::leverage_scores(a, 4);
    CHECK(std::fabs(std::accumulate(sa.col_probs.begin(), sa.col_probs.end(), 0.0) - 1.0) <= 1e-12);
    CHECK(std::fabs(std::accumulate(sa.row_probs.begin(), sa.row_probs.end(), 0.0) - 1.0) <= 1e-12);
    for (double p : sa.col_probs) CHECK(p >= 0.0);

    CHECK_THROWS_AS(twsp::leverage_scores(a, 0), std::invalid_argument);
    CHECK_THROWS_AS(twsp::leverage_scores(a, 7), std::invalid_argument);
}

TEST_CASE("leverage_cur and random_cur are deterministic, distinct, bounded") {
    const DenseMatrix x = twsp::low_rank_plus_noise({9, 11, 3, 0.3, 17});
    const auto sv = twsp::singular_values(x);
    const double fro2 = twsp::fro_norm(x) * twsp::fro_norm(x);

    for (std::uint64_t seed : {0u, 1u, 2u}) {
        const auto lev = twsp::leverage_cur(x, 3, 3, 3, seed);
        const auto lev2 = twsp::leverage_cur(x, 3, 3, 3, seed);
        REQUIRE(lev.col_indices == lev2.col_indices);
        REQUIRE(lev.row_indices == lev2.row_indices);
        check_distinct_in_range(lev.col_indices, x.cols());
        check_distinct_in_range(lev.row_indices, x.rows());
        const double e = twsp::reconstruction_error(x, lev.col_indices, lev.row_indices);
        CHECK(e * e >= tail_energy(sv, 3) - 1e-8 * fro2);
        CHECK(e <= twsp::fro_norm(x) * (1.0 + 1e-12));

        const auto rnd = twsp::random_cur(x, 3, 3, seed);
        const auto rnd2 = twsp::random_cur(x, 3, 3, seed);
        REQUIRE(rnd.col_indices == rnd2.col_indices);
        REQUIRE(rnd.row_indices == rnd2.row_indices);
        check_distinct_in_range(rnd.col_indices, x.cols());
        check_distinct_in_range(rnd.row_indices, x.rows());
        const double er = twsp::reconstruction_error(x, rnd.col_indices, rnd.row_indices);
        CHECK(er * er >= tail_energy(sv, 3) - 1e-8 * fro2);
    }
}

TEST_CASE("random_cur never selects zero columns or rows") {
    DenseMatrix x = gaussian_matrix(6, 7, 23);
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, 4) = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) x(2, j) = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto dec = twsp::random_cur(x, 3, 3, seed);
        for (std::size_t c : dec.col_indices) CHECK(c != 4);
        for (std::size_t r : dec.row_indices) CHECK(r != 2);
    }
}

TEST_CASE("brute_force_cur finds exact decompositions when they exist") {
    const DenseMatrix r1 = rank_k_matrix(4, 5, 1, 29);
    const auto one = twsp::brute_force_cur(r1, 1, 1);
    CHECK(one.error <= 1e-10 * twsp::fro_norm(r1));

    const auto eye = twsp::brute_force_cur(DenseMatrix::identity(3), 3, 3);
    CHECK(eye.error <= 1e-12);
    CHECK(eye.decomposition.col_indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(eye.decomposition.row_indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("brute_force_cur dominates sampled selections") {
    const DenseMatrix x = gaussian_matrix(6, 7, 2);
    const auto oracle = twsp::brute_force_cur(x, 2, 2);
    twsp::Rng rng(55);
    std::vector<std::size_t> all_cols(x.cols()), all_rows(x.rows());
    std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    for (int rep = 0; rep < 100; ++rep) {
        const auto cols = rng.sample_without_replacement(all_cols, 2);
        const auto rows = rng.sample_without_replacement(all_rows, 2);
        CHECK(oracle.error <= twsp::reconstruction_error(x, cols, rows) + 1e-10);
    }
}

TEST_CASE("brute_force_cur lower-bounds every selector") {
    const DenseMatrix x = twsp::low_rank_plus_noise({6, 8, 2, 0.2, 37});
    const auto oracle = twsp::brute_force_cur(x, 2, 2);

    twsp::SolverConfig cfg;
    cfg.k1 = cfg.k2 = 2;
    cfg.seed = 0;
    const auto tw = twsp::solve(x, cfg);
    CHECK(twsp::reconstruction_error(x, tw.decomposition.col_indices,
                                     tw.decomposition.row_indices) >= oracle.error - 1e-10);

    const auto sp = twsp::sp_independent_cur(x, 2, 2, 0);
    CHECK(twsp::reconstruction_error(x, sp.col_indices, sp.row_indices) >= oracle.error - 1e-10);
    const auto lev = twsp::leverage_cur(x, 2, 2, 2, 0);
    CHECK(twsp::reconstruction_error(x, lev.col_indices, lev.row_indices) >= oracle.error - 1e-10);
    const auto rnd = twsp::random_cur(x, 2, 2, 0);
    CHECK(twsp::reconstruction_error(x, rnd.col_indices, rnd.row_indices) >= oracle.error - 1e-10);
}

TEST_CASE("brute_force_cur refuses oversized searches") {
    const DenseMatrix x = gaussian_matrix(30, 30, 3);
    CHECK_THROWS_AS(twsp::brute_force_cur(x, 8, 8), std::length_error);
    CHECK_THROWS_WITH(twsp::brute_force_cur(x, 8, 8), Catch::Matchers::ContainsSubstring("1e6") ||
                                                          Catch::Matchers::ContainsSubstring("guard"));
}

TEST_CASE("baseline names") {
    CHECK(std::string(twsp::to_cstring(twsp::Baseline::sp_independent)) == "sp");
    CHECK(std::string(twsp::to_cstring(twsp::Baseline::brute_force)) == "brute");
}
