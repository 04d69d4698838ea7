#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <twsp/applications.hpp>

#include "support.hpp"

using twsp::DenseMatrix;
using namespace test_support;

namespace {

std::vector<std::size_t> iota_ids(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

}  // namespace

TEST_CASE("assign_top_f identity core") {
    const DenseMatrix core = DenseMatrix::identity(3);
    const auto ids = iota_ids(3);
    const auto a = twsp::assign_top_f(core, 1, ids, ids);
    REQUIRE(a.rows.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        REQUIRE(a.rows[k].picks.size() == 1);
        CHECK(a.rows[k].row == k);
        CHECK(a.rows[k].picks[0].channel == k);
        CHECK(a.rows[k].picks[0].value == 1.0);
    }
}

TEST_CASE("assign_top_f orders by absolute value") {
    const DenseMatrix core = DenseMatrix::from_rows({{3.0, -5.0, 1.0}});
    const auto a = twsp::assign_top_f(core, 2, iota_ids(1), iota_ids(3));
    REQUIRE(a.rows.size() == 1);
    REQUIRE(a.rows[0].picks.size() == 2);
    CHECK(a.rows[0].picks[0].channel == 1);
    CHECK(a.rows[0].picks[0].value == -5.0);
    CHECK(a.rows[0].picks[1].channel == 0);
    CHECK(a.rows[0].picks[1].value == 3.0);
}

TEST_CASE("assign_top_f matches a full-sort oracle") {
    const DenseMatrix core = gaussian_matrix(5, 6, 4);
    const auto a = twsp::assign_top_f(core, 3, iota_ids(5), iota_ids(6));
    for (std::size_t i = 0; i < 5; ++i) {
        std::vector<std::size_t> order(6);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::fabs(core(i, x)) > std::fabs(core(i, y));
        });
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(a.rows[i].picks[t].channel == order[t]);
            CHECK(a.rows[i].picks[t].value == core(i, order[t]));
        }
    }
}

TEST_CASE("assign_top_f breaks magnitude ties toward the lower column") {
    const DenseMatrix core = DenseMatrix::from_rows({{-2.0, 2.0, 2.0}});
    const auto a = twsp::assign_top_f(core, 2, iota_ids(1), iota_ids(3));
    CHECK(a.rows[0].picks[0].channel == 0);
    CHECK(a.rows[0].picks[1].channel == 1);
}

TEST_CASE("assign_top_f respects nontrivial axis labels") {
    const DenseMatrix core = DenseMatrix::from_rows({{1.0, 9.0}, {7.0, 2.0}});
    const std::vector<std::size_t> row_ids{40, 17};
    const std::vector<std::size_t> col_ids{5, 11};
    const auto a = twsp::assign_top_f(core, 1, row_ids, col_ids);
    CHECK(a.rows[0].row == 40);
    CHECK(a.rows[0].picks[0].channel == 11);
    CHECK(a.rows[1].row == 17);
    CHECK(a.rows[1].picks[0].channel == 5);
}

TEST_CASE("assign_top_f validates its inputs") {
    const DenseMatrix core = DenseMatrix::identity(2);
    const auto ids = iota_ids(2);
    CHECK_THROWS_AS(twsp::assign_top_f(core, 0, ids, ids), std::invalid_argument);
    CHECK_THROWS_AS(twsp::assign_top_f(core, 3, ids, ids), std::invalid_argument);
    CHECK_THROWS_AS(twsp::assign_top_f(core, 1, iota_ids(3), ids), std::invalid_argument);
    CHECK_THROWS_AS(twsp::assign_top_f(DenseMatrix(), 1, {}, {}), std::invalid_argument);
}

TEST_CASE("cross_class_kernel analytic cases") {
    const DenseMatrix eye = DenseMatrix::identity(2);
    CHECK(max_abs_diff(twsp::cross_class_kernel(eye, eye), eye) == 0.0);

    const DenseMatrix c = DenseMatrix::from_rows({{1.0}, {2.0}, {-1.0}});
    const DenseMatrix d = DenseMatrix::from_rows({{3.0}, {0.5}, {2.0}});
    const DenseMatrix k = twsp::cross_class_kernel(c, d);
    REQUIRE(k.rows() == 1);
    REQUIRE(k.cols() == 1);
    CHECK(std::fabs(k(0, 0) - (3.0 * 1.0 + 0.5 * 2.0 + 2.0 * -1.0)) <= 1e-12);
}

TEST_CASE("cross_class_kernel entries match the dot-product oracle") {
    const DenseMatrix x1 = gaussian_matrix(4, 3, 6);
    const DenseMatrix x2 = gaussian_matrix(4, 5, 7);
    const DenseMatrix k = twsp::cross_class_kernel(x1, x2);
    REQUIRE(k.rows() == 5);
    REQUIRE(k.cols() == 3);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < 4; ++t) dot += x2(t, i) * x1(t, j);
            CHECK(std::fabs(k(i, j) - dot) <= 1e-12 * std::max(1.0, std::fabs(dot)));
        }
    }
}

TEST_CASE("cross_class_kernel transpose symmetry") {
    const DenseMatrix x1 = gaussian_matrix(6, 4, 8);
    const DenseMatrix x2 = gaussian_matrix(6, 7, 9);
    const DenseMatrix a = twsp::cross_class_kernel(x1, x2);
    const DenseMatrix b = twsp::cross_class_kernel(x2, x1);
    CHECK(max_abs_diff(a.transposed(), b) <= 1e-12);
}

TEST_CASE("cross_class_kernel validates the feature dimension") {
    CHECK_THROWS_AS(twsp::cross_class_kernel(gaussian_matrix(4, 2, 1), gaussian_matrix(5, 2, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(twsp::cross_class_kernel(DenseMatrix(), DenseMatrix()), std::invalid_argument);
}

TEST_CASE("one-vs-all kernels via column concatenation") {
    const DenseMatrix x1 = gaussian_matrix(5, 2, 12);
    const DenseMatrix x2a = gaussian_matrix(5, 3, 13);
    const DenseMatrix x2b = gaussian_matrix(5, 4, 14);
    const DenseMatrix rest = twsp::hstack(x2a, x2b);
    const DenseMatrix k = twsp::cross_class_kernel(x1, rest);
    REQUIRE(k.rows() == 7);
    REQUIRE(k.cols() == 2);
    const DenseMatrix ka = twsp::cross_class_kernel(x1, x2a);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(k(i, j) == ka(i, j));
}
