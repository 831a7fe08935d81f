#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ptperm {

using Cplx = std::complex<double>;

/// Dense complex 2x2 matrix, row-major [[m11,m12],[m21,m22]].
/// All operations are pure and return new values.
struct Mat2 {
    Cplx m11{}, m12{}, m21{}, m22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    /// Exchange matrix X = [[0,1],[1,0]].
    static Mat2 exchange() { return {0.0, 1.0, 1.0, 0.0}; }

    Mat2 transposed() const { return {m11, m21, m12, m22}; }

    Mat2 adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }

    Cplx trace() const { return m11 + m22; }
    Cplx det() const { return m11 * m22 - m12 * m21; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }

    friend Mat2 operator*(Cplx s, const Mat2& m) {
        return {s * m.m11, s * m.m12, s * m.m21, s * m.m22};
    }

    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Row-and-column-reversed transpose X·mᵀ·X = [[m22,m12],[m21,m11]].
/// The antidiagonal entries are unchanged.
inline Mat2 row_col_reverse(const Mat2& m) {
    return {m.m22, m.m12, m.m21, m.m11};
}

/// perm of [[a,b],[c,d]] = ad + bc.
inline Cplx perm2(const Mat2& m) {
    return m.m11 * m.m22 + m.m12 * m.m21;
}

/// Entrywise squared modulus |A|² = A ∘ A*. Entries come out real.
inline Mat2 hadamard_abs_square(const Mat2& m) {
    return {std::norm(m.m11), std::norm(m.m12), std::norm(m.m21), std::norm(m.m22)};
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    Mat2 d = a - b;
    return std::max(std::max(std::abs(d.m11), std::abs(d.m12)),
                    std::max(std::abs(d.m21), std::abs(d.m22)));
}

inline double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.m11), std::abs(m.m12)),
                    std::max(std::abs(m.m21), std::abs(m.m22)));
}

namespace detail {

// Below this, cos and sinc switch to Taylor expansions so the closed-form
// matrix exponential stays continuous through the exceptional point mu = 0.
inline constexpr double kDegenerateZ = 1e-6;

inline Cplx sinc(Cplx z) {
    if (std::abs(z) < kDegenerateZ) {
        Cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
    }
    return std::sin(z) / z;
}

inline Cplx cosz(Cplx z) {
    if (std::abs(z) < kDegenerateZ) {
        Cplx z2 = z * z;
        return 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
    }
    return std::cos(z);
}

}  // namespace detail

/// exp(-i·h·t) in closed form. Split h = s·I + A with A traceless; then
/// exp(-i·h·t) = e^{-i·s·t}·(cos(mu·t)·I - i·t·sinc(mu·t)·A) with mu² = -det(A).
/// Valid for any complex h, including defective ones (mu = 0).
inline Mat2 expm2(const Mat2& h, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("expm2: negative evolution length");
    }
    const Cplx s = 0.5 * h.trace();
    const Mat2 a{h.m11 - s, h.m12, h.m21, h.m22 - s};
    const Cplx mu = std::sqrt(-a.det());
    const Cplx z = mu * t;
    const Cplx phase = std::exp(Cplx(0.0, -1.0) * s * t);
    const Cplx c = detail::cosz(z);
    const Cplx f = Cplx(0.0, -1.0) * t * detail::sinc(z);
    return {phase * (c + f * a.m11), phase * (f * a.m12),
            phase * (f * a.m21), phase * (c + f * a.m22)};
}

/// Dense complex n×n matrix, row-major.
class MatN {
public:
    explicit MatN(std::size_t n) : n_(n), e_(n * n) {}

    MatN(std::size_t n, std::vector<Cplx> entries) : n_(n), e_(std::move(entries)) {
        if (e_.size() != n_ * n_) {
            throw std::invalid_argument("MatN: entry count does not match dimension");
        }
    }

    static MatN identity(std::size_t n) {
        MatN m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return n_; }
    Cplx& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Cplx& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    const std::vector<Cplx>& entries() const { return e_; }

    friend MatN operator*(const MatN& a, const MatN& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("MatN: dimension mismatch");
        MatN r(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                Cplx aik = a.at(i, k);
                for (std::size_t j = 0; j < a.n_; ++j) r.at(i, j) += aik * b.at(k, j);
            }
        return r;
    }

    friend bool operator==(const MatN&, const MatN&) = default;

private:
    std::size_t n_;
    std::vector<Cplx> e_;
};

inline MatN hadamard_abs_square(const MatN& m) {
    MatN r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) r.at(i, j) = std::norm(m.at(i, j));
    return r;
}

inline constexpr std::size_t kPermanentDimCap = 12;

/// Exact permanent by Ryser's inclusion-exclusion with Gray-code column
/// updates, O(2ⁿ·n) scalar work. Dimensions above `cap` are rejected.
inline Cplx permN(const MatN& m, std::size_t cap = kPermanentDimCap) {
    const std::size_t n = m.dim();
    if (n > cap) {
        throw std::invalid_argument("permN: dimension exceeds cap");
    }
    if (n == 0) return 1.0;
    // Direct expansion for n <= 3; keeps 2x2 results bit-identical to perm2.
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) + m.at(0, 1) * m.at(1, 0);
    if (n == 3) {
        return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) + m.at(1, 2) * m.at(2, 1)) +
               m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) + m.at(1, 2) * m.at(2, 0)) +
               m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) + m.at(1, 1) * m.at(2, 0));
    }

    std::vector<Cplx> rowsum(n, 0.0);
    Cplx total = 0.0;
    const std::uint64_t end = std::uint64_t{1} << n;
    std::uint64_t gray_prev = 0;
    for (std::uint64_t k = 1; k < end; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t changed = gray ^ gray_prev;
        std::size_t j = 0;
        while ((changed >> j) == 0 || ((changed >> j) & 1u) == 0) ++j;
        const double sign = (gray & changed) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) rowsum[i] += sign * m.at(i, j);
        gray_prev = gray;

        Cplx prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= rowsum[i];
        int popcount = 0;
        for (std::uint64_t g = gray; g; g >>= 1) popcount += static_cast<int>(g & 1u);
        const bool neg = ((n - static_cast<std::size_t>(popcount)) & 1u) != 0;
        total += neg ? -prod : prod;
    }
    return total;
}

/// Permanent of the square submatrix selected by distinct row and column
/// index sets (must be equal-sized, in-range, without repetition).
inline Cplx subpermanent(const MatN& m, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols) {
    if (rows.size() != cols.size()) {
        throw std::invalid_argument("subpermanent: index set size mismatch");
    }
    MatN sub(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) sub.at(i, j) = m.at(rows[i], cols[j]);
    return permN(sub);
}

}  // namespace ptperm
