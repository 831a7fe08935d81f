#include <doctest.h>

#include "ptperm/invariance.hpp"
#include "ptperm/propagator.hpp"

using namespace ptperm;

namespace {
const Mat2 kM{1.0, 2.0, 3.0, 4.0};
}

TEST_CASE("pair invariance on the worked example") {
    // (XMᵀX)M and M(XMᵀX) for M=[[1,2],[3,4]] both have permanent 196,
    // matching (m11m22+m12m21)² + 4·m11·m12·m21·m22 = 100 + 96.
    Mat2 left = row_col_reverse(kM) * kM;
    Mat2 right = kM * row_col_reverse(kM);
    CHECK(perm2(left) == Cplx(196.0));
    CHECK(perm2(right) == Cplx(196.0));
    CHECK(perm2(hadamard_abs_square(left)) == Cplx(19216.0));
    CHECK(perm2(hadamard_abs_square(right)) == Cplx(19216.0));

    PairResiduals r = check_pair_invariance(kM);
    CHECK(r.permanent < 1e-14);
    CHECK(r.expanded < 1e-14);
    CHECK(r.dist < 1e-14);

    CHECK(check_pair_invariance(Mat2::identity()).max() == 0.0);
    CHECK(check_pair_invariance(coupler_50_50()).max() < 1e-15);
}

TEST_CASE("pair invariance randomized run") {
    InvarianceReport r = run_pair_invariance(5000, 7);
    CHECK(r.trials == 5000);
    CHECK(r.max_residual < 1e-10);
    CHECK(r.counterexamples.empty());

    // deterministic given (seed, trials)
    InvarianceReport again = run_pair_invariance(5000, 7);
    CHECK(again.max_residual == r.max_residual);
}

TEST_CASE("sequence reversal") {
    SUBCASE("single element is its own reversal") {
        std::vector<SequenceElement> seq{{ElementKind::BlockM, {}}};
        CHECK(check_sequence_reversal(seq, kM).max() == 0.0);
    }
    SUBCASE("worked pair") {
        std::vector<SequenceElement> seq{{ElementKind::BlockM, {}},
                                         {ElementKind::BlockXmtX, {}}};
        CHECK(check_sequence_reversal(seq, kM).max() < 1e-12);
    }
    SUBCASE("empty sequence rejected") {
        CHECK_THROWS_AS((void)check_sequence_reversal({}, kM), std::invalid_argument);
    }
    SUBCASE("length-10 random runs") {
        InvarianceReport r = run_sequence_reversal(2000, 10, 7);
        CHECK(r.max_residual < 1e-10);
        CHECK(r.counterexamples.empty());
    }
}

TEST_CASE("antidiagonal lemma") {
    SUBCASE("equal matrices commute trivially") {
        CHECK(check_antidiagonal_lemma(kM, kM).max() == 0.0);
    }
    SUBCASE("diagonal matrices share the zero antidiagonal") {
        Mat2 a{2.0, 0.0, 0.0, 5.0}, b{-1.0, 0.0, 0.0, 3.0};
        CHECK(check_antidiagonal_lemma(a, b).max() == 0.0);
    }
    SUBCASE("mismatched antidiagonals rejected") {
        Mat2 b{1.0, 9.0, 3.0, 4.0};
        CHECK_THROWS_AS((void)check_antidiagonal_lemma(kM, b), std::invalid_argument);
    }
    SUBCASE("random shared-antidiagonal pairs") {
        InvarianceReport r = run_antidiagonal_lemma(2000, 7);
        CHECK(r.max_residual < 1e-12);
        CHECK(r.counterexamples.empty());
    }
}

TEST_CASE("unitary external phases") {
    SUBCASE("coupler: products are crossovers, so only moduli are checked") {
        UnitaryPhaseResult r = check_unitary_external_phase(coupler_50_50());
        CHECK(r.modulus_residual < 1e-15);
        CHECK_FALSE(r.phases_recovered);
    }
    SUBCASE("unbalanced unitary recovers the diagonal phase factors") {
        Mat2 u = expm2(Mat2{0.3, Cplx(1.0, 0.2), Cplx(1.0, -0.2), -0.4}, 0.37);
        UnitaryPhaseResult r = check_unitary_external_phase(u);
        CHECK(r.modulus_residual < 1e-12);
        CHECK(r.phases_recovered);
        CHECK(r.phase_residual < 1e-12);
    }
    SUBCASE("identity") {
        UnitaryPhaseResult r = check_unitary_external_phase(Mat2::identity());
        CHECK(r.modulus_residual == 0.0);
    }
    SUBCASE("non-unitary rejected") {
        CHECK_THROWS_AS((void)check_unitary_external_phase(kM), std::invalid_argument);
    }
    SUBCASE("random Haar unitaries") {
        InvarianceReport r = run_unitary_phase(1000, 7);
        CHECK(r.max_residual < 1e-10);
        CHECK(r.counterexamples.empty());
    }
}

TEST_CASE("custom shared-antidiagonal sequences") {
    InvarianceReport r = run_antidiag_sequences(2000, 6, 7);
    CHECK(r.max_residual < 1e-10);
    CHECK(r.counterexamples.empty());
}

TEST_CASE("three-mode PMP search") {
    ThreeModeReport r = search_3mode(50, 3);
    CHECK(r.trials == 50);
    CHECK(r.max_pmp_residual < 1e-10);
    CHECK(r.failed_pmp_trials.empty());
    CHECK(r.non_pmp_samples > 0);
    // order invariance for arbitrary rearrangements would be a surprise;
    // hits are logged, not asserted, so just confirm the log is sane.
    CHECK(r.non_pmp_hit_trials.size() <= r.non_pmp_samples);

    ThreeModeReport again = search_3mode(50, 3);
    CHECK(again.max_pmp_residual == r.max_pmp_residual);
    CHECK(again.non_pmp_samples == r.non_pmp_samples);

    CHECK_THROWS_AS((void)search_3mode(0, 1), std::invalid_argument);
}

TEST_CASE("N = M (identity permutation) is exactly invariant") {
    SplitMix64 rng(31);
    MatN m = random_matn_unit_disc(rng, 3);
    MatN nm = m * m;
    CHECK(rel_residual(permN(nm), permN(nm)) == 0.0);
}

TEST_CASE("residual helper") {
    CHECK(rel_residual(Cplx(1.0), Cplx(1.0)) == 0.0);
    CHECK(rel_residual(Cplx(1e6), Cplx(1e6 + 1.0)) == doctest::Approx(1.0 / (1e6 + 1.0)));
    CHECK(rel_residual(Cplx(1e-20), Cplx(0.0)) == doctest::Approx(1e-20));
}
