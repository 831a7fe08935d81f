#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "ptperm/mat.hpp"

namespace ptperm {

/// SplitMix64 (Steele, Lea, Vigna). Fixed algorithm so that seeded residual
/// logs reproduce bit-identically across platforms and compilers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0,1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Derives a per-trial stream from a base seed, so trial k is reproducible
/// in isolation and independent of evaluation order.
inline SplitMix64 trial_stream(std::uint64_t base_seed, std::uint64_t trial) {
    SplitMix64 mix(base_seed ^ (0x2545f4914f6cdd1dULL * (trial + 1)));
    return SplitMix64(mix.next());
}

/// re, im uniform on [-1,1], rejected to the closed unit disc.
inline Cplx unit_disc_entry(SplitMix64& rng) {
    for (;;) {
        double re = rng.uniform(-1.0, 1.0);
        double im = rng.uniform(-1.0, 1.0);
        if (re * re + im * im <= 1.0) return {re, im};
    }
}

inline Mat2 random_mat2_unit_disc(SplitMix64& rng) {
    return {unit_disc_entry(rng), unit_disc_entry(rng), unit_disc_entry(rng),
            unit_disc_entry(rng)};
}

inline MatN random_matn_unit_disc(SplitMix64& rng, std::size_t n) {
    MatN m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = unit_disc_entry(rng);
    return m;
}

/// Haar-distributed 2x2 unitary: mixing angle from arccos(sqrt(u)),
/// three independent uniform phases.
inline Mat2 random_unitary2(SplitMix64& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    double theta = std::acos(std::sqrt(rng.uniform01()));
    double alpha = rng.uniform(0.0, two_pi);
    double beta = rng.uniform(0.0, two_pi);
    double phi = rng.uniform(0.0, two_pi);
    Cplx g = std::polar(1.0, phi);
    double c = std::cos(theta), s = std::sin(theta);
    return {g * std::polar(c, alpha), g * std::polar(s, beta),
            g * (-std::polar(s, -beta)), g * std::polar(c, -alpha)};
}

}  // namespace ptperm
