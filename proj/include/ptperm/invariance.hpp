#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptperm/dd.hpp"
#include "ptperm/mat.hpp"
#include "ptperm/rng.hpp"

namespace ptperm {

/// Mixed absolute-relative residual |a-b| / max(1, |a|, |b|).
inline double rel_residual(Cplx a, Cplx b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_residual(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline constexpr double kDefaultTol = 1e-10;

struct Counterexample {
    std::uint64_t trial{};
    double residual{};
    std::vector<Mat2> matrices;
};

struct InvarianceReport {
    std::uint64_t trials{};
    double max_residual{};
    std::vector<Counterexample> counterexamples;
};

// ---------------------------------------------------------------------------
// Single-instance checks

struct PairResiduals {
    double permanent{};   // perm((XMᵀX)M) vs perm(M(XMᵀX))
    double expanded{};    // both vs (m11m22+m12m21)² + 4·m11·m12·m21·m22
    double dist{};        // perm|(XMᵀX)M|² vs perm|M(XMᵀX)|²
    double max() const { return std::max({permanent, expanded, dist}); }
};

inline PairResiduals check_pair_invariance(const Mat2& m) {
    const Mat2 xmtx = row_col_reverse(m);
    const Mat2 left = xmtx * m;
    const Mat2 right = m * xmtx;
    const Cplx pl = perm2(left);
    const Cplx pr = perm2(right);
    const Cplx diag = m.m11 * m.m22 + m.m12 * m.m21;
    const Cplx expanded = diag * diag + 4.0 * m.m11 * m.m12 * m.m21 * m.m22;
    PairResiduals r;
    r.permanent = rel_residual(pl, pr);
    r.expanded = std::max(rel_residual(pl, expanded), rel_residual(pr, expanded));
    r.dist = rel_residual(perm2(hadamard_abs_square(left)), perm2(hadamard_abs_square(right)));
    return r;
}

/// Same pair check re-evaluated in double-double arithmetic (expanded form
/// omitted; it only disambiguates the printed formula, not the invariance).
inline PairResiduals check_pair_invariance_dd(const Mat2& m) {
    const dd::Mat md = dd::from(m);
    const dd::Mat xd = dd::from(row_col_reverse(m));
    const Cplx pl = dd::to_cplx(dd::perm(dd::mul(xd, md)));
    const Cplx pr = dd::to_cplx(dd::perm(dd::mul(md, xd)));
    const dd::Mat lh = dd::from(hadamard_abs_square(row_col_reverse(m) * m));
    const dd::Mat rh = dd::from(hadamard_abs_square(m * row_col_reverse(m)));
    PairResiduals r;
    r.permanent = rel_residual(pl, pr);
    r.expanded = 0.0;
    r.dist = rel_residual(dd::to_cplx(dd::perm(lh)), dd::to_cplx(dd::perm(rh)));
    return r;
}

enum class ElementKind { BlockM, BlockXmtX, Custom };

struct SequenceElement {
    ElementKind kind{ElementKind::BlockM};
    Mat2 custom;
};

inline Mat2 materialize(const SequenceElement& e, const Mat2& base) {
    switch (e.kind) {
        case ElementKind::BlockM: return base;
        case ElementKind::BlockXmtX: return row_col_reverse(base);
        case ElementKind::Custom: return e.custom;
    }
    throw std::invalid_argument("materialize: bad element kind");
}

struct SequenceResiduals {
    double permanent{};
    double dist{};
    double max() const { return std::max(permanent, dist); }
};

/// Permanent residual between the ordered product and the reversed-order
/// product of a materialized sequence, plus the distinguishable variant.
inline SequenceResiduals check_sequence_reversal(std::span<const SequenceElement> seq,
                                                 const Mat2& base) {
    if (seq.empty()) throw std::invalid_argument("check_sequence_reversal: empty sequence");
    Mat2 fwd = Mat2::identity();
    Mat2 rev = Mat2::identity();
    for (const SequenceElement& e : seq) {
        const Mat2 m = materialize(e, base);
        fwd = fwd * m;
        rev = m * rev;
    }
    SequenceResiduals r;
    r.permanent = rel_residual(perm2(fwd), perm2(rev));
    r.dist = rel_residual(perm2(hadamard_abs_square(fwd)), perm2(hadamard_abs_square(rev)));
    return r;
}

inline SequenceResiduals check_sequence_reversal_dd(std::span<const SequenceElement> seq,
                                                    const Mat2& base) {
    if (seq.empty()) throw std::invalid_argument("check_sequence_reversal: empty sequence");
    dd::Mat fwd = dd::from(Mat2::identity());
    dd::Mat rev = fwd;
    Mat2 fwd_d = Mat2::identity();
    Mat2 rev_d = Mat2::identity();
    for (const SequenceElement& e : seq) {
        const Mat2 m = materialize(e, base);
        fwd = dd::mul(fwd, dd::from(m));
        rev = dd::mul(dd::from(m), rev);
        fwd_d = fwd_d * m;
        rev_d = m * rev_d;
    }
    SequenceResiduals r;
    r.permanent = rel_residual(dd::to_cplx(dd::perm(fwd)), dd::to_cplx(dd::perm(rev)));
    r.dist = rel_residual(perm2(hadamard_abs_square(fwd_d)), perm2(hadamard_abs_square(rev_d)));
    return r;
}

struct AntidiagResiduals {
    double diagonal{};
    double permanent{};
    double max() const { return std::max(diagonal, permanent); }
};

/// For a, b sharing one antidiagonal pair: diag(ab) = diag(ba) entrywise and
/// perm(ab) = perm(ba).
inline AntidiagResiduals check_antidiagonal_lemma(const Mat2& a, const Mat2& b) {
    if (a.m12 != b.m12 || a.m21 != b.m21) {
        throw std::invalid_argument("check_antidiagonal_lemma: antidiagonals differ");
    }
    const Mat2 ab = a * b;
    const Mat2 ba = b * a;
    AntidiagResiduals r;
    r.diagonal = std::max(rel_residual(ab.m11, ba.m11), rel_residual(ab.m22, ba.m22));
    r.permanent = rel_residual(perm2(ab), perm2(ba));
    return r;
}

inline AntidiagResiduals check_antidiagonal_lemma_dd(const Mat2& a, const Mat2& b) {
    const dd::Mat ab = dd::mul(dd::from(a), dd::from(b));
    const dd::Mat ba = dd::mul(dd::from(b), dd::from(a));
    AntidiagResiduals r;
    r.diagonal = std::max(rel_residual(dd::to_cplx(ab.m11), dd::to_cplx(ba.m11)),
                          rel_residual(dd::to_cplx(ab.m22), dd::to_cplx(ba.m22)));
    r.permanent = rel_residual(dd::to_cplx(dd::perm(ab)), dd::to_cplx(dd::perm(ba)));
    return r;
}

struct UnitaryPhaseResult {
    double modulus_residual{};
    bool phases_recovered{};
    double phase_residual{};
    double max() const { return std::max(modulus_residual, phases_recovered ? phase_residual : 0.0); }
};

/// For unitary m: (XMᵀX)M and M(XMᵀX) agree entrywise in modulus, and when
/// no entry vanishes they differ only by diagonal unimodular factors
/// D1·(M(XMᵀX))·D2 recovered from entry phase ratios.
inline UnitaryPhaseResult check_unitary_external_phase(const Mat2& m, double tol = kDefaultTol) {
    if (max_abs_diff(m * m.adjoint(), Mat2::identity()) > tol) {
        throw std::invalid_argument("check_unitary_external_phase: input not unitary");
    }
    const Mat2 xmtx = row_col_reverse(m);
    const Mat2 a = xmtx * m;
    const Mat2 b = m * xmtx;
    UnitaryPhaseResult r;
    r.modulus_residual = std::max(
        std::max(std::abs(std::abs(a.m11) - std::abs(b.m11)),
                 std::abs(std::abs(a.m12) - std::abs(b.m12))),
        std::max(std::abs(std::abs(a.m21) - std::abs(b.m21)),
                 std::abs(std::abs(a.m22) - std::abs(b.m22))));

    const double entry_floor = 1e-12;
    const bool all_nonzero = std::abs(b.m11) > entry_floor && std::abs(b.m12) > entry_floor &&
                             std::abs(b.m21) > entry_floor && std::abs(b.m22) > entry_floor;
    if (!all_nonzero) {
        r.phases_recovered = false;
        return r;
    }
    // a_ij = e^{i(t1_i + t2_j)} b_ij; fix t2_1 = 0, read the rest off ratios.
    const double t1_1 = std::arg(a.m11 / b.m11);
    const double t1_2 = std::arg(a.m21 / b.m21);
    const double t2_2 = std::arg(a.m12 / b.m12) - t1_1;
    const Cplx d1a = std::polar(1.0, t1_1), d1b = std::polar(1.0, t1_2);
    const Cplx d2b = std::polar(1.0, t2_2);
    const Mat2 reconstructed{d1a * b.m11, d1a * d2b * b.m12, d1b * b.m21, d1b * d2b * b.m22};
    r.phases_recovered = true;
    r.phase_residual = max_abs_diff(a, reconstructed);
    return r;
}

// ---------------------------------------------------------------------------
// Randomized runners. Sequential and per-trial seeded: results depend only on
// (seed, trials). Residuals above tol are re-evaluated in double-double
// arithmetic and certified only if they survive at a 10x tighter tolerance.

namespace detail {

template <typename Check, typename CheckDD>
InvarianceReport run_trials(std::uint64_t trials, std::uint64_t seed, double tol, Check check,
                            CheckDD check_dd) {
    InvarianceReport report;
    report.trials = trials;
    for (std::uint64_t k = 0; k < trials; ++k) {
        SplitMix64 rng = trial_stream(seed, k);
        auto [residual, matrices] = check(rng);
        if (residual > tol) {
            SplitMix64 replay = trial_stream(seed, k);
            double confirmed = check_dd(replay);
            if (confirmed > tol / 10.0) {
                report.counterexamples.push_back({k, confirmed, matrices});
                residual = confirmed;
            } else {
                residual = confirmed;
            }
        }
        report.max_residual = std::max(report.max_residual, residual);
    }
    return report;
}

inline std::vector<SequenceElement> random_block_sequence(SplitMix64& rng, int max_len) {
    const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len));
    std::vector<SequenceElement> seq(static_cast<std::size_t>(len));
    for (auto& e : seq) {
        e.kind = (rng.next() & 1u) ? ElementKind::BlockM : ElementKind::BlockXmtX;
    }
    return seq;
}

}  // namespace detail

inline InvarianceReport run_pair_invariance(std::uint64_t trials, std::uint64_t seed,
                                            double tol = kDefaultTol) {
    return detail::run_trials(
        trials, seed, tol,
        [](SplitMix64& rng) {
            Mat2 m = random_mat2_unit_disc(rng);
            return std::pair{check_pair_invariance(m).max(), std::vector<Mat2>{m}};
        },
        [](SplitMix64& rng) {
            Mat2 m = random_mat2_unit_disc(rng);
            // The expanded-form residual is not dd-checked; keep the larger
            // of the dd pair residuals and the double-precision expanded one.
            return std::max(check_pair_invariance_dd(m).max(),
                            check_pair_invariance(m).expanded);
        });
}

inline InvarianceReport run_sequence_reversal(std::uint64_t trials, int max_len,
                                              std::uint64_t seed, double tol = kDefaultTol) {
    if (max_len < 1) throw std::invalid_argument("run_sequence_reversal: max_len must be >= 1");
    return detail::run_trials(
        trials, seed, tol,
        [max_len](SplitMix64& rng) {
            Mat2 base = random_mat2_unit_disc(rng);
            auto seq = detail::random_block_sequence(rng, max_len);
            return std::pair{check_sequence_reversal(seq, base).max(), std::vector<Mat2>{base}};
        },
        [max_len](SplitMix64& rng) {
            Mat2 base = random_mat2_unit_disc(rng);
            auto seq = detail::random_block_sequence(rng, max_len);
            return check_sequence_reversal_dd(seq, base).max();
        });
}

inline InvarianceReport run_antidiagonal_lemma(std::uint64_t trials, std::uint64_t seed,
                                               double tol = 1e-12) {
    auto draw = [](SplitMix64& rng) {
        Cplx off1 = unit_disc_entry(rng), off2 = unit_disc_entry(rng);
        Mat2 a{unit_disc_entry(rng), off1, off2, unit_disc_entry(rng)};
        Mat2 b{unit_disc_entry(rng), off1, off2, unit_disc_entry(rng)};
        return std::pair{a, b};
    };
    return detail::run_trials(
        trials, seed, tol,
        [draw](SplitMix64& rng) {
            auto [a, b] = draw(rng);
            return std::pair{check_antidiagonal_lemma(a, b).max(), std::vector<Mat2>{a, b}};
        },
        [draw](SplitMix64& rng) {
            auto [a, b] = draw(rng);
            return check_antidiagonal_lemma_dd(a, b).max();
        });
}

inline InvarianceReport run_unitary_phase(std::uint64_t trials, std::uint64_t seed,
                                          double tol = kDefaultTol) {
    return detail::run_trials(
        trials, seed, tol,
        [tol](SplitMix64& rng) {
            Mat2 m = random_unitary2(rng);
            return std::pair{check_unitary_external_phase(m, tol).max(), std::vector<Mat2>{m}};
        },
        [tol](SplitMix64& rng) {
            Mat2 m = random_unitary2(rng);
            return check_unitary_external_phase(m, tol).max();
        });
}

/// Sequences of distinct CUSTOM matrices all sharing one antidiagonal pair;
/// probes the general-lemma sentence beyond the {M, XMᵀX} alphabet.
inline InvarianceReport run_antidiag_sequences(std::uint64_t trials, int max_len,
                                               std::uint64_t seed, double tol = kDefaultTol) {
    if (max_len < 1) throw std::invalid_argument("run_antidiag_sequences: max_len must be >= 1");
    auto draw = [max_len](SplitMix64& rng) {
        const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len));
        Cplx off1 = unit_disc_entry(rng), off2 = unit_disc_entry(rng);
        std::vector<SequenceElement> seq(static_cast<std::size_t>(len));
        for (auto& e : seq) {
            e.kind = ElementKind::Custom;
            e.custom = Mat2{unit_disc_entry(rng), off1, off2, unit_disc_entry(rng)};
        }
        return seq;
    };
    const Mat2 unused = Mat2::identity();
    return detail::run_trials(
        trials, seed, tol,
        [draw, unused](SplitMix64& rng) {
            auto seq = draw(rng);
            std::vector<Mat2> mats;
            for (const auto& e : seq) mats.push_back(e.custom);
            return std::pair{check_sequence_reversal(seq, unused).max(), mats};
        },
        [draw, unused](SplitMix64& rng) {
            auto seq = draw(rng);
            return check_sequence_reversal_dd(seq, unused).max();
        });
}

// ---------------------------------------------------------------------------
// Three-mode N = PMP search

struct ThreeModeReport {
    std::uint64_t trials{};
    double max_pmp_residual{};
    std::vector<std::uint64_t> failed_pmp_trials;
    std::uint64_t non_pmp_samples{};
    std::vector<std::uint64_t> non_pmp_hit_trials;  // informational, not a failure
};

namespace detail {

inline const std::array<std::array<std::size_t, 3>, 6>& perms3() {
    static const std::array<std::array<std::size_t, 3>, 6> p{{{0, 1, 2},
                                                              {0, 2, 1},
                                                              {1, 0, 2},
                                                              {1, 2, 0},
                                                              {2, 0, 1},
                                                              {2, 1, 0}}};
    return p;
}

inline MatN permutation_matrix3(const std::array<std::size_t, 3>& sigma) {
    MatN p(3);
    for (std::size_t i = 0; i < 3; ++i) p.at(i, sigma[i]) = 1.0;
    return p;
}

// All size-k subsets of {0,1,2}.
inline const std::vector<std::vector<std::size_t>>& subsets3(std::size_t k) {
    static const std::vector<std::vector<std::size_t>> s1{{0}, {1}, {2}};
    static const std::vector<std::vector<std::size_t>> s2{{0, 1}, {0, 2}, {1, 2}};
    static const std::vector<std::vector<std::size_t>> s3{{0, 1, 2}};
    switch (k) {
        case 1: return s1;
        case 2: return s2;
        default: return s3;
    }
}

inline std::vector<std::size_t> apply_inverse(const std::array<std::size_t, 3>& sigma,
                                              const std::vector<std::size_t>& idx) {
    std::array<std::size_t, 3> inv{};
    for (std::size_t i = 0; i < 3; ++i) inv[sigma[i]] = i;
    std::vector<std::size_t> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(inv[i]);
    std::sort(out.begin(), out.end());
    return out;
}

// Sorted list of every k×k subpermanent value (k = 1..3), used for the
// pairing-free comparison of non-PMP arrangements.
inline std::vector<Cplx> all_subperms_sorted(const MatN& m) {
    std::vector<Cplx> vals;
    for (std::size_t k = 1; k <= 3; ++k) {
        for (const auto& rows : subsets3(k))
            for (const auto& cols : subsets3(k)) vals.push_back(subpermanent(m, rows, cols));
    }
    std::sort(vals.begin(), vals.end(), [](Cplx a, Cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return vals;
}

}  // namespace detail

/// For every permutation P: N = PMP must satisfy perm(NM) = perm(MN) and
/// subperm_{MN}(S,T) = subperm_{NM}(σ⁻¹S, σ⁻¹T) for all distinct-index
/// row/column subsets (the simultaneous-permutation pairing MN = Pᵀ(NM)P).
/// Additionally samples random non-PMP rearrangements of M's entries and
/// logs (never asserts) any that display the same order invariance.
inline ThreeModeReport search_3mode(std::uint64_t trials, std::uint64_t seed,
                                    double tol = kDefaultTol,
                                    int non_pmp_samples_per_trial = 10) {
    if (trials == 0) throw std::invalid_argument("search_3mode: trials must be > 0");
    ThreeModeReport report;
    report.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng = trial_stream(seed, t);
        const MatN m = random_matn_unit_disc(rng, 3);

        double worst = 0.0;
        for (const auto& sigma : detail::perms3()) {
            const MatN p = detail::permutation_matrix3(sigma);
            const MatN n = p * m * p;
            const MatN nm = n * m;
            const MatN mn = m * n;
            worst = std::max(worst, rel_residual(permN(nm), permN(mn)));
            for (std::size_t k = 1; k <= 2; ++k) {
                for (const auto& rows : detail::subsets3(k)) {
                    for (const auto& cols : detail::subsets3(k)) {
                        const Cplx a = subpermanent(mn, rows, cols);
                        const Cplx b = subpermanent(nm, detail::apply_inverse(sigma, rows),
                                                    detail::apply_inverse(sigma, cols));
                        worst = std::max(worst, rel_residual(a, b));
                    }
                }
            }
        }
        report.max_pmp_residual = std::max(report.max_pmp_residual, worst);
        if (worst > tol) report.failed_pmp_trials.push_back(t);

        // Random rearrangements of the same nine entries.
        for (int s = 0; s < non_pmp_samples_per_trial; ++s) {
            std::vector<Cplx> entries = m.entries();
            for (std::size_t i = entries.size(); i > 1; --i) {
                std::size_t j = static_cast<std::size_t>(rng.next() % i);
                std::swap(entries[i - 1], entries[j]);
            }
            const MatN n(3, entries);
            bool is_pmp = false;
            for (const auto& sigma : detail::perms3()) {
                const MatN p = detail::permutation_matrix3(sigma);
                if (n == p * m * p) {
                    is_pmp = true;
                    break;
                }
            }
            if (is_pmp) continue;
            ++report.non_pmp_samples;
            const MatN nm = n * m;
            const MatN mn = m * n;
            if (rel_residual(permN(nm), permN(mn)) > tol) continue;
            const auto a = detail::all_subperms_sorted(nm);
            const auto b = detail::all_subperms_sorted(mn);
            bool match = true;
            for (std::size_t i = 0; i < a.size() && match; ++i) {
                if (rel_residual(a[i], b[i]) > tol) match = false;
            }
            if (match) report.non_pmp_hit_trials.push_back(t);
        }
    }
    return report;
}

}  // namespace ptperm
