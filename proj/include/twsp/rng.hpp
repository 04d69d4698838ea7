#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace twsp {

/**
 * Deterministic random stream used wherever the library needs randomness.
 *
 * The engine is std::mt19937_64, whose output sequence is pinned down by the
 * C++ standard, so a given seed produces the same stream on every conforming
 * implementation. All derived draws are implemented here rather than through
 * std::*_distribution (whose algorithms are implementation-defined):
 *
 *  - next_u64():      raw engine output.
 *  - next_unit():     (next_u64() >> 11) * 2^-53, uniform on [0, 1).
 *  - next_index(n):   unbiased uniform on {0, ..., n-1}; rejection-sampled
 *                     modulo (draw x until x >= 2^64 mod n, return x % n).
 *  - next_gaussian(): Box-Muller with fixed pairing. Two engine draws map to
 *                     u1 in (0, 1] and u2 in [0, 1); the cosine variate
 *                     sqrt(-2 ln u1) cos(2 pi u2) is returned first and the
 *                     sine variate is cached for the next call.
 *  - sample_without_replacement(pool, k): partial Fisher-Yates over a copy of
 *                     the pool, one next_index draw per output position; the
 *                     first k entries are returned in draw order.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t next_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::next_index: empty range");
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        std::uint64_t x = next_u64();
        while (x < threshold) x = next_u64();
        return x % n;
    }

    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t k) {
        if (k > pool.size())
            throw std::invalid_argument("Rng::sample_without_replacement: k exceeds pool size");
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t pick = t + static_cast<std::size_t>(next_index(pool.size() - t));
            std::swap(pool[t], pool[pick]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace twsp
