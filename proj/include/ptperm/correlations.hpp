#pragma once

#include <optional>
#include <stdexcept>

#include "ptperm/mat.hpp"

namespace ptperm {

/// Below this absolute distinguishable-photon probability the visibility is
/// reported as undefined rather than 0: p_dist is a sum of nonnegative
/// products and vanishes only when every transmission path vanishes.
inline constexpr double kDistProbFloor = 1e-300;

struct TwoPhotonResult {
    double p_indist{};
    double p_dist{};
    std::optional<double> visibility;
};

/// Coincidence probability for an indistinguishable pair: |perm T|².
inline double p11_indist(const Mat2& t) {
    return std::norm(perm2(t));
}

/// Coincidence probability for a distinguishable pair: perm |T|².
inline double p11_dist(const Mat2& t) {
    return perm2(hadamard_abs_square(t)).real();
}

/// Two-photon visibility V = P_indist/P_dist - 1, or nullopt where P_dist
/// vanishes. V = -1 means complete HOM interference, V > 0 antibunching.
inline std::optional<double> visibility(const Mat2& t) {
    const double pd = p11_dist(t);
    if (pd <= kDistProbFloor) return std::nullopt;
    return p11_indist(t) / pd - 1.0;
}

/// Visibility for photons with overlap x in [0,1], modeled as the convex
/// mixture P = x·P_indist + (1-x)·P_dist, which scales V by x.
inline std::optional<double> visibility_partial(const Mat2& t, double indistinguishability) {
    if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
        throw std::invalid_argument("visibility_partial: indistinguishability outside [0,1]");
    }
    const auto v = visibility(t);
    if (!v) return std::nullopt;
    return indistinguishability * *v;
}

inline TwoPhotonResult two_photon(const Mat2& t, double indistinguishability = 1.0) {
    return {p11_indist(t), p11_dist(t), visibility_partial(t, indistinguishability)};
}

}  // namespace ptperm
