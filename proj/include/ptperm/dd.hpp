#pragma once

#include <cmath>

#include "ptperm/mat.hpp"

namespace ptperm::dd {

/// Unevaluated double-double sum hi + lo, |lo| <= ulp(hi)/2.
/// Built from error-free transformations (Knuth two-sum, FMA two-prod);
/// used only to re-evaluate suspected invariance counterexamples.
struct Real {
    double hi{};
    double lo{};
};

inline Real two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline Real quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline Real two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Real add(Real a, Real b) {
    Real s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Real sub(Real a, Real b) { return add(a, {-b.hi, -b.lo}); }

inline Real mul(Real a, Real b) {
    Real p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline double to_double(Real a) { return a.hi + a.lo; }

struct Complex {
    Real re{};
    Real im{};
};

inline Complex from(Cplx z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }
inline Cplx to_cplx(Complex z) { return {to_double(z.re), to_double(z.im)}; }

inline Complex add(Complex a, Complex b) { return {add(a.re, b.re), add(a.im, b.im)}; }

inline Complex mul(Complex a, Complex b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)),
            add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline double abs(Complex z) { return std::hypot(to_double(z.re), to_double(z.im)); }

/// 2x2 complex matrix with double-double entries, row-major.
struct Mat {
    Complex m11, m12, m21, m22;
};

inline Mat from(const Mat2& m) {
    return {from(m.m11), from(m.m12), from(m.m21), from(m.m22)};
}

inline Mat mul(const Mat& a, const Mat& b) {
    return {add(mul(a.m11, b.m11), mul(a.m12, b.m21)),
            add(mul(a.m11, b.m12), mul(a.m12, b.m22)),
            add(mul(a.m21, b.m11), mul(a.m22, b.m21)),
            add(mul(a.m21, b.m12), mul(a.m22, b.m22))};
}

inline Complex perm(const Mat& m) {
    return add(mul(m.m11, m.m22), mul(m.m12, m.m21));
}

}  // namespace ptperm::dd
