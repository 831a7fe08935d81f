#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptperm/correlations.hpp"
#include "ptperm/propagator.hpp"

namespace ptperm {

struct AxisSpec {
    double min{};
    double max{};
    std::size_t steps{};

    void validate(const char* name) const {
        if (steps < 2) throw std::invalid_argument(std::string(name) + ": steps must be >= 2");
        if (!(min < max)) throw std::invalid_argument(std::string(name) + ": min must be < max");
    }

    double at(std::size_t i) const {
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

/// Visibility over a kl × (γ/κ) grid for one geometry; values row-major with
/// kl fastest. Undefined visibility carried as nullopt, never as 0.
struct VisibilityGrid {
    Geometry config{};
    std::vector<double> kl_axis;
    std::vector<Cplx> gok_axis;
    std::vector<std::optional<double>> values;
};

/// Evaluates visibility(compose_geometry(config, ·)) over the grid with the
/// coupling normalized to 1, so l = κl and γ = γ/κ. gok sweeps the real axis.
inline VisibilityGrid visibility_map(Geometry config, AxisSpec kl, AxisSpec gok) {
    kl.validate("kl");
    gok.validate("gok");
    if (!(kl.min >= 0.0)) throw std::invalid_argument("kl: must be >= 0");
    VisibilityGrid grid;
    grid.config = config;
    grid.kl_axis.reserve(kl.steps);
    for (std::size_t i = 0; i < kl.steps; ++i) grid.kl_axis.push_back(kl.at(i));
    grid.gok_axis.reserve(gok.steps);
    for (std::size_t j = 0; j < gok.steps; ++j) grid.gok_axis.emplace_back(gok.at(j), 0.0);
    grid.values.reserve(kl.steps * gok.steps);
    for (std::size_t j = 0; j < gok.steps; ++j) {
        for (std::size_t i = 0; i < kl.steps; ++i) {
            CouplerParams p{1.0, grid.gok_axis[j], grid.kl_axis[i]};
            grid.values.push_back(visibility(compose_geometry(config, p)));
        }
    }
    return grid;
}

/// Visibility-vs-physical-length curves for a set of geometries at fixed
/// complex γ/κ and coupling κ, scaled by the indistinguishability.
struct CurveSet {
    std::vector<Geometry> configs;
    Cplx gamma_over_kappa{};
    double kappa{};
    std::vector<double> lengths;
    std::vector<std::vector<std::optional<double>>> values;  // one list per config
    double indistinguishability{1.0};
};

inline CurveSet visibility_curves(std::vector<Geometry> configs, double kappa, Cplx gamma,
                                  std::vector<double> lengths, double indistinguishability) {
    if (!(kappa > 0.0)) throw std::invalid_argument("visibility_curves: kappa must be > 0");
    if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
        throw std::invalid_argument("visibility_curves: indistinguishability outside [0,1]");
    }
    CurveSet cs;
    cs.configs = std::move(configs);
    cs.gamma_over_kappa = gamma / kappa;
    cs.kappa = kappa;
    cs.lengths = std::move(lengths);
    cs.indistinguishability = indistinguishability;
    cs.values.reserve(cs.configs.size());
    for (Geometry g : cs.configs) {
        std::vector<std::optional<double>> curve;
        curve.reserve(cs.lengths.size());
        for (double l : cs.lengths) {
            CouplerParams p{kappa, gamma, l};
            curve.push_back(visibility_partial(compose_geometry(g, p), indistinguishability));
        }
        cs.values.push_back(std::move(curve));
    }
    return cs;
}

/// Locations of extrema (sub-grid, via three-point quadratic refinement) and
/// zero crossings of a sampled visibility curve, plus a monotonic-tail flag.
struct Features {
    std::vector<double> minima;
    std::vector<double> maxima;
    std::vector<double> zero_crossings;
    bool monotonic_tail{};
};

inline Features extract_features(std::span<const double> axis,
                                 std::span<const std::optional<double>> values) {
    if (axis.size() != values.size()) {
        throw std::invalid_argument("extract_features: axis/value size mismatch");
    }
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i]) {
            xs.push_back(axis[i]);
            vs.push_back(*values[i]);
        }
    }
    if (vs.size() < 3) throw std::invalid_argument("extract_features: fewer than 3 defined samples");

    Features f;
    auto refine = [&](std::size_t i) {
        // Quadratic through (x_{i-1},v_{i-1}), (x_i,v_i), (x_{i+1},v_{i+1});
        // valid for locally uniform spacing, which the sweep axes guarantee.
        double denom = vs[i - 1] - 2.0 * vs[i] + vs[i + 1];
        if (denom == 0.0) return xs[i];
        double h = 0.5 * (xs[i + 1] - xs[i - 1]);
        return xs[i] - 0.5 * h * (vs[i + 1] - vs[i - 1]) / denom;
    };
    // Prominence floor: suppresses the 1-ulp wiggles of saturated regions
    // without losing genuine extrema at realistic sample densities.
    const double prominence = 1e-12;
    std::size_t last_extremum = 0;
    for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
        if (vs[i] < vs[i - 1] && vs[i] <= vs[i + 1] &&
            std::min(vs[i - 1], vs[i + 1]) - vs[i] > prominence) {
            f.minima.push_back(refine(i));
            last_extremum = i;
        } else if (vs[i] > vs[i - 1] && vs[i] >= vs[i + 1] &&
                   vs[i] - std::max(vs[i - 1], vs[i + 1]) > prominence) {
            f.maxima.push_back(refine(i));
            last_extremum = i;
        }
    }
    for (std::size_t i = 1; i < vs.size(); ++i) {
        if ((vs[i - 1] < 0.0 && vs[i] >= 0.0) || (vs[i - 1] > 0.0 && vs[i] <= 0.0)) {
            double t = vs[i - 1] / (vs[i - 1] - vs[i]);
            f.zero_crossings.push_back(xs[i - 1] + t * (xs[i] - xs[i - 1]));
        }
    }
    // Tail = samples after the last extremum. Flagged monotonic when it is
    // non-decreasing (to roundoff) and spans at least 30% of the samples.
    const std::size_t tail_len = vs.size() - last_extremum;
    bool nondecreasing = true;
    for (std::size_t i = last_extremum + 1; i < vs.size(); ++i) {
        if (vs[i] < vs[i - 1] - 1e-12) {
            nondecreasing = false;
            break;
        }
    }
    f.monotonic_tail = nondecreasing && tail_len * 10 >= vs.size() * 3;
    return f;
}

}  // namespace ptperm
