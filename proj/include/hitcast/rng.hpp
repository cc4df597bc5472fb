#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hitcast/errors.hpp"

namespace hitcast {

// Deterministic random source. std::mt19937_64 output is specified bit-for-bit
// by the standard; the distributions below are hand-rolled because the
// standard library's distribution objects are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw InternalError("Rng::below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw InternalError("Rng::range: lo > hi");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(below(span));
    }

    // Uniform double in [0, 1).
    double real() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (no caching, two draws per value).
    double normal() {
        double u1;
        do {
            u1 = real();
        } while (u1 <= 0.0);
        const double u2 = real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Poisson count, Knuth's product method. Fine for the small rates used
    // here; cost grows linearly with lambda.
    std::uint64_t poisson(double lambda) {
        if (lambda < 0.0) throw InternalError("Rng::poisson: negative rate");
        if (lambda == 0.0) return 0;
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= real();
        } while (p > limit);
        return k - 1;
    }

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace hitcast
