#pragma once

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptperm/mat.hpp"

namespace ptperm {

/// Physical parameters of one passive PT coupler section. kappa and gamma
/// carry units of inverse length, length the matching length unit.
/// Im(gamma) models inadvertent detuning; Re(gamma) < 0 (gain) is rejected.
struct CouplerParams {
    double kappa{};
    Cplx gamma{};
    double length{};

    void validate() const {
        if (!(kappa > 0.0)) throw std::invalid_argument("CouplerParams: kappa must be > 0");
        if (!(length >= 0.0)) throw std::invalid_argument("CouplerParams: length must be >= 0");
        if (!(gamma.real() >= 0.0)) {
            throw std::invalid_argument("CouplerParams: Re(gamma) must be >= 0 (passive system)");
        }
    }
};

/// One piecewise-constant evolution segment.
struct Segment {
    Mat2 hamiltonian;
    double length{};
};

/// The four interferometer arrangements, with M = U(l)·R.
enum class Geometry { MXmtX, MMt, MtM, XmtXM };

inline std::string_view geometry_name(Geometry g) {
    switch (g) {
        case Geometry::MXmtX: return "m-xmtx";
        case Geometry::MMt: return "m-mt";
        case Geometry::MtM: return "mt-m";
        case Geometry::XmtXM: return "xmtx-m";
    }
    throw std::invalid_argument("geometry_name: bad tag");
}

inline Geometry parse_geometry(std::string_view s) {
    if (s == "m-xmtx") return Geometry::MXmtX;
    if (s == "m-mt") return Geometry::MMt;
    if (s == "mt-m") return Geometry::MtM;
    if (s == "xmtx-m") return Geometry::XmtXM;
    throw std::invalid_argument("unknown geometry '" + std::string(s) + "'");
}

inline const std::vector<Geometry>& all_geometries() {
    static const std::vector<Geometry> g{Geometry::MXmtX, Geometry::MMt, Geometry::MtM,
                                         Geometry::XmtXM};
    return g;
}

/// Effective PT-coupler Hamiltonian [[-i·gamma, kappa],[kappa, 0]].
inline Mat2 h_eff(double kappa, Cplx gamma) {
    if (!(kappa > 0.0)) throw std::invalid_argument("h_eff: kappa must be > 0");
    return {Cplx(0.0, -1.0) * gamma, kappa, kappa, 0.0};
}

/// Classical propagator U = exp(-i·H_eff·l); sub-unitary for lossy sections.
inline Mat2 pt_propagator(const CouplerParams& p) {
    p.validate();
    return expm2(h_eff(p.kappa, p.gamma), p.length);
}

/// 50:50 directional coupler R = (1/sqrt(2))·[[1,-i],[-i,1]]; R² = -i·X.
inline Mat2 coupler_50_50() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {s, Cplx(0.0, -s), Cplx(0.0, -s), s};
}

/// Building block M = U·R: a 50:50 coupler followed by a PT coupler.
inline Mat2 building_block(const CouplerParams& p) {
    return pt_propagator(p) * coupler_50_50();
}

/// Transmission matrix of one of the four arrangements, composed as the raw
/// product of the stated factors with no phase normalization.
inline Mat2 compose_geometry(Geometry g, const CouplerParams& p) {
    const Mat2 m = building_block(p);
    const Mat2 xmtx = row_col_reverse(m);
    switch (g) {
        case Geometry::MXmtX: return m * xmtx;
        case Geometry::MMt: return m * m.transposed();
        case Geometry::MtM: return m.transposed() * m;
        case Geometry::XmtXM: return xmtx * m;
    }
    throw std::invalid_argument("compose_geometry: bad tag");
}

/// Time-ordered product over piecewise-constant segments; the first segment
/// acts first, so later segments multiply from the left.
inline Mat2 propagate_piecewise(std::span<const Segment> segments) {
    Mat2 acc = Mat2::identity();
    for (const Segment& s : segments) {
        acc = expm2(s.hamiltonian, s.length) * acc;
    }
    return acc;
}

/// Reverses segment order and conjugates each Hamiltonian by X.
/// For segmentwise-symmetric Hamiltonians the resulting propagator equals
/// X·(original propagator)ᵀ·X.
inline std::vector<Segment> parity_swap_reverse(std::span<const Segment> segments) {
    const Mat2 x = Mat2::exchange();
    std::vector<Segment> out;
    out.reserve(segments.size());
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        out.push_back({x * it->hamiltonian * x, it->length});
    }
    return out;
}

}  // namespace ptperm
