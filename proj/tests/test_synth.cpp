#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include <twsp/linalg.hpp>
#include <twsp/synth.hpp>

#include "support.hpp"

using twsp::DenseMatrix;
using twsp::SynthSpec;

TEST_CASE("noiseless generation has exactly the requested rank") {
    const DenseMatrix x = twsp::low_rank_plus_noise({15, 12, 4, 0.0, 3});
    const auto sv = twsp::singular_values(x);
    std::size_t above = 0;
    for (double s : sv)
        if (s > 1e-8 * sv[0]) ++above;
    CHECK(above == 4);
}

TEST_CASE("generation is deterministic for a fixed spec") {
    const SynthSpec spec{8, 13, 2, 0.7, 42};
    const DenseMatrix a = twsp::low_rank_plus_noise(spec);
    const DenseMatrix b = twsp::low_rank_plus_noise(spec);
    CHECK(a == b);

    const DenseMatrix c = twsp::low_rank_plus_noise({8, 13, 2, 0.7, 43});
    CHECK_FALSE(a == c);
}

TEST_CASE("mean squared entry concentrates at rank + sigma^2") {
    const std::size_t n = 120, m = 100, r = 5;
    const double sigma = 0.3;
    const DenseMatrix x = twsp::low_rank_plus_noise({n, m, r, sigma, 11});
    double mean_sq = 0.0;
    for (double v : x.data()) mean_sq += v * v;
    mean_sq /= static_cast<double>(n * m);
    const double expected = static_cast<double>(r) + sigma * sigma;
    CHECK(std::fabs(mean_sq - expected) <= 0.2 * expected);
}

TEST_CASE("benchmark-scale shape generates cleanly") {
    const DenseMatrix x = twsp::low_rank_plus_noise(
        {1000, 2000, 30, twsp::noise_sigma_for_ratio(30, 0.1), 0});
    REQUIRE(x.rows() == 1000);
    REQUIRE(x.cols() == 2000);
    double mean_sq = 0.0;
    for (double v : x.data()) mean_sq += v * v;
    mean_sq /= static_cast<double>(x.size());
    const double expected = 30.0 + 0.09 * 30.0;
    CHECK(std::fabs(mean_sq - expected) <= 0.2 * expected);
}

TEST_CASE("noise_sigma_for_ratio matches its definition") {
    CHECK(std::fabs(twsp::noise_sigma_for_ratio(30, 0.1) - 0.1 * std::sqrt(30.0)) <= 1e-15);
    CHECK(twsp::noise_sigma_for_ratio(4, 0.5) == 1.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(twsp::low_rank_plus_noise({0, 5, 1, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(twsp::low_rank_plus_noise({5, 5, 0, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(twsp::low_rank_plus_noise({5, 5, 6, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(twsp::low_rank_plus_noise({5, 5, 2, -0.1, 0}), std::invalid_argument);
}
