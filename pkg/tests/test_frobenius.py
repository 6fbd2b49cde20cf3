import math

import pytest

from g2image.arith import IntPoly
from g2image.frobenius import (
    CurveModel,
    FrobeniusPoly,
    count_points,
    frobenius_poly,
    good_primes,
    is_good_prime,
)

from .curves import CURVE_249, CURVE_47089, FIXTURE_CURVES
from .oracles import naive_affine_count, naive_affine_count_fp2, sqrt_table_affine_count_fp2


def projective_count_oracle(curve, p, r):
    """Literal (x, y) enumeration plus infinity bookkeeping, test-side."""
    g = curve.g
    if r == 1:
        affine = naive_affine_count(curve.f, curve.h, p)
        if g.degree == 5:
            return affine + 1
        chi_lc = 1 if pow(g.lc % p, (p - 1) // 2, p) == 1 else -1
        return affine + 1 + chi_lc
    affine = naive_affine_count_fp2(curve.f, curve.h, p)
    return affine + (1 if g.degree == 5 else 2)


class TestGoodPrime:
    def test_bad_prime_three(self):
        assert not is_good_prime(CURVE_249, 3)

    def test_two_always_excluded(self):
        assert not is_good_prime(CURVE_249, 2)

    def test_five_good(self):
        # oracle: disc(4f+h^2) = 2^12 * 249, and 5 divides neither it nor lc
        assert CURVE_249.g.discriminant() % 5 != 0
        assert is_good_prime(CURVE_249, 5)


class TestCountPoints:
    def test_249_f5_matches_naive(self):
        expected = projective_count_oracle(CURVE_249, 5, 1)
        assert count_points(CURVE_249, 5, 1) == expected

    def test_249_f25_matches_naive(self):
        expected = projective_count_oracle(CURVE_249, 5, 2)
        assert count_points(CURVE_249, 5, 2) == expected

    def test_weil_interval(self):
        for p in good_primes(CURVE_249, 60):
            n = count_points(CURVE_249, p, 1)
            assert (p + 1 - 4 * math.sqrt(p)) <= n <= (p + 1 + 4 * math.sqrt(p))

    def test_bad_prime_rejected(self):
        with pytest.raises(ValueError):
            count_points(CURVE_249, 3, 1)

    def test_naive_agreement_small_primes_all_fixtures(self):
        for curve in FIXTURE_CURVES:
            for p in good_primes(curve, 20):
                assert count_points(curve, p, 1) == projective_count_oracle(curve, p, 1)
                assert count_points(curve, p, 2) == projective_count_oracle(curve, p, 2)

    def test_sqrt_table_agreement_fp2(self):
        # second independent F_{p^2} count, via a squares table
        for curve in FIXTURE_CURVES[:2]:
            for p in list(good_primes(curve, 30))[:4]:
                affine = sqrt_table_affine_count_fp2(curve.f, curve.h, p)
                infinity = 1 if curve.g.degree == 5 else 2
                assert count_points(curve, p, 2) == affine + infinity


class TestFrobeniusPoly:
    def test_249_at_5(self):
        F = frobenius_poly(CURVE_249, 5)
        assert F.p == 5
        n1 = projective_count_oracle(CURVE_249, 5, 1)
        n2 = projective_count_oracle(CURVE_249, 5, 2)
        assert F.a == 5 + 1 - n1
        assert F.b == (F.a**2 - (25 + 1 - n2)) // 2
        assert abs(F.a) <= 8

    def test_showcase_curve_at_3(self):
        F = frobenius_poly(CURVE_47089, 3)
        n1 = projective_count_oracle(CURVE_47089, 3, 1)
        n2 = projective_count_oracle(CURVE_47089, 3, 2)
        assert F.a == 3 + 1 - n1
        assert F.b == (F.a**2 - (9 + 1 - n2)) // 2

    def test_constant_coefficient_is_p_squared(self):
        F = frobenius_poly(CURVE_249, 7)
        assert F.poly()[0] == 49
        assert F.poly().is_monic and F.poly().degree == 4

    def test_poly_reproduces_point_counts(self):
        # #C(F_p) = p + 1 - a and #C(F_{p^2}) = p^2 + 1 - (a^2 - 2b)
        for curve in FIXTURE_CURVES:
            for p in good_primes(curve, 200):
                F = frobenius_poly(curve, p)
                assert count_points(curve, p, 1) == p + 1 - F.a
                assert count_points(curve, p, 2) == p * p + 1 - (F.a**2 - 2 * F.b)
                assert F.a * F.a <= 16 * p

    def test_weil_bound_enforced(self):
        with pytest.raises(ValueError):
            FrobeniusPoly(p=5, a=10, b=0)


def test_curve_model_validation():
    with pytest.raises(ValueError):
        CurveModel(f=IntPoly([0, 1]), h=IntPoly([]), conductor=1)  # deg(4f+h^2) too low
    with pytest.raises(ValueError):
        # 4f + h^2 = 4x^6 has a multiple root
        CurveModel(f=IntPoly([0, 0, 0, 0, 0, 0, 1]), h=IntPoly([]), conductor=1)
