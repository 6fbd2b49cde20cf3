import math
import random
from types import SimpleNamespace

import pytest

from g2image.arith import IntPoly, power_roots
from g2image.frobenius import frobenius_poly
from g2image.hecke_data import HeckeTable, MissingHeckeData
from g2image.sieve import (
    EndomorphismSuspected,
    SieveConfig,
    UnconstrainedCharacter,
    alg_odd,
    alg_quad,
    alg_related,
    alg_selfdual,
    auxiliary_primes,
    character_space_dimension,
    hecke_q_poly,
    odd_subquotient_term,
    possibly_nonsurjective,
    quadratic_characters,
    related_quartic,
)

from .curves import CURVE_169, CURVE_249, CURVE_3125
from .oracles import poly_from_roots


class TestQuadraticCharacters:
    def test_dimension_249(self):
        # 249 = 3 * 83, odd: d = omega = 2, so 3 nontrivial characters
        chars = quadratic_characters(249)
        assert character_space_dimension(249) == 2
        assert len(chars) == 3

    def test_dimension_976(self):
        # 976 = 2^4 * 61, v2 >= 3: d = omega + 1 = 3, so 7 characters
        assert character_space_dimension(976) == 3
        assert len(quadratic_characters(976)) == 7

    def test_dimension_2(self):
        assert character_space_dimension(2) == 0
        assert quadratic_characters(2) == []

    def test_values_multiplicative_pm1(self):
        for phi in quadratic_characters(249):
            vals = {}
            for n in range(1, 400):
                if math.gcd(n, 249) == 1 and n % 2 == 1:
                    vals[n] = phi(n)
                    assert vals[n] in (1, -1)
            for a in (5, 7, 11):
                for b in (13, 17):
                    assert vals[a * b] == vals[a] * vals[b]

    def test_legendre_component_matches_euler(self):
        (phi,) = [c for c in quadratic_characters(249) if c.label == "leg83"]
        for p in (2, 5, 7, 11, 13):
            want = 1 if pow(p, 41, 83) == 1 else -1
            assert phi(p) == want


class TestRelatedQuartic:
    def test_zero_trace_zero_middle(self):
        F = SimpleNamespace(p=5, a=0, b=0)
        assert related_quartic(F) == IntPoly([625, 250, 50, 10, 1])

    def test_pairing_structure(self):
        F = SimpleNamespace(p=11, a=3, b=-2)
        q = related_quartic(F)
        assert q[0] == 11 ** 4
        assert q[1] == 11 ** 2 * q[3]

    def test_synthetic_cross_products(self):
        # P with roots {2, 3, 1, 6}: pairs (2,3) and (1,6) multiply to 6,
        # so the related quartic has the four cross products {2,12,3,18}
        roots = [2, 3, 1, 6]
        p = 6
        a = sum(roots)
        b = sum(roots[i] * roots[j] for i in range(4) for j in range(i + 1, 4))
        F = SimpleNamespace(p=p, a=a, b=b)
        assert related_quartic(F) == poly_from_roots([2, 12, 3, 18])


class TestHeckeQPoly:
    def test_empty_product(self):
        assert hecke_q_poly(IntPoly([1]), 5) == IntPoly([1])

    def test_single_orbit(self):
        assert hecke_q_poly(IntPoly([-3, 1]), 7) == IntPoly([7, -3, 1])

    def test_quadratic_orbit(self):
        # H = z^2 - 5 -> t^4 + (2p - 5) t^2 + p^2
        for p in (3, 7, 11):
            got = hecke_q_poly(IntPoly([-5, 0, 1]), p)
            assert got == IntPoly([p * p, 0, 2 * p - 5, 0, 1])


class TestAlgOdd:
    def test_squarefree_conductor_uses_first_power(self):
        # N_sq = 1 forces f' = 1 and R_p = P_p(1)
        F = frobenius_poly(CURVE_249, 5)
        assert power_roots(F.poly(), 1) == F.poly()
        assert odd_subquotient_term(CURVE_249, F) == 5 * F.poly()(1)

    def test_single_aux_exact(self):
        F = frobenius_poly(CURVE_249, 7)
        assert alg_odd(CURVE_249, [7]) == abs(7 * F.poly()(1))

    def test_support_within_paper_output(self):
        m = alg_odd(CURVE_249, auxiliary_primes(CURVE_249, 1000))
        from g2image.arith import factor_multiplicities

        assert set(factor_multiplicities(m)) <= {2, 3, 5, 7, 83}


class TestAlgRelated:
    def test_x1_13_endomorphism(self):
        with pytest.raises(EndomorphismSuspected) as info:
            alg_related(CURVE_169, auxiliary_primes(CURVE_169, 200))
        assert info.value.algorithm == "alg_related"

    def test_single_aux_exact(self):
        p = 5
        F = frobenius_poly(CURVE_249, p)
        q = related_quartic(F)
        expected = abs(p * q(1) * q(p))  # N_sq = 1 so f' = 1
        assert alg_related(CURVE_249, [p]) == expected


class TestAlgSelfdual:
    def test_zero_dimensional_levels(self):
        # N = 249: divisors 1 and 3 below sqrt(249), both genus zero;
        # M(d) is then just the gcd of the auxiliary primes
        out = alg_selfdual(CURVE_249, [5, 7], HeckeTable())
        assert out == {1: 1, 3: 1}

    def test_missing_data_is_loud(self):
        from .curves import load_fixture_curve

        curve = load_fixture_curve("529.a.529.1")
        with pytest.raises(MissingHeckeData) as info:
            alg_selfdual(curve, [3, 5], HeckeTable())
        assert info.value.level == 23


class TestAlgQuad:
    def test_cm_curve_suspected(self):
        with pytest.raises(EndomorphismSuspected) as info:
            alg_quad(CURVE_3125, auxiliary_primes(CURVE_3125, 1000))
        assert info.value.algorithm == "alg_quad"
        assert info.value.site == "leg5"

    def test_single_prime_exact(self):
        # pick an aux prime inert for some character with a_p nonzero
        chars = quadratic_characters(249)
        phi = chars[0]
        for p in auxiliary_primes(CURVE_249, 100):
            if phi(p) == -1 and frobenius_poly(CURVE_249, p).a != 0:
                out = alg_quad(CURVE_249, [p])
                assert out[phi.label] == p * abs(frobenius_poly(CURVE_249, p).a)
                break
        else:
            pytest.fail("no qualifying prime found")

    def test_unconstrained_character(self):
        chars = quadratic_characters(249)
        phi = chars[0]
        aux = [p for p in auxiliary_primes(CURVE_249, 300) if phi(p) == 1][:8]
        with pytest.raises((UnconstrainedCharacter, EndomorphismSuspected)) as info:
            alg_quad(CURVE_249, aux)
        if isinstance(info.value, UnconstrainedCharacter):
            assert info.value.character.label == phi.label


class TestPossiblyNonsurjective:
    def test_paper_worked_example(self):
        report = possibly_nonsurjective(CURVE_249)
        assert report.possibly_nonsurjective == (2, 3, 5, 7, 83)

    def test_invariants(self):
        report = possibly_nonsurjective(CURVE_249)
        out = set(report.possibly_nonsurjective)
        assert {2, 3, 5, 7} <= out
        assert {3, 83} <= out  # conductor primes present
        for p in out:
            assert report.provenance[p]
        assert "divides_conductor" in report.provenance[83]

    def test_prime_conductor_in_output(self):
        from .curves import load_fixture_curve

        curve = load_fixture_curve("743.a.743.1")
        report = possibly_nonsurjective(curve)
        assert 743 in report.possibly_nonsurjective

    def test_monotone_in_aux_pool(self):
        small = possibly_nonsurjective(
            CURVE_249, SieveConfig(aux_bound=200, early_exit=False))
        large = possibly_nonsurjective(
            CURVE_249, SieveConfig(aux_bound=1000, early_exit=False))
        assert set(large.possibly_nonsurjective) <= set(small.possibly_nonsurjective)

    def test_gcds_invariant_under_permutation(self):
        aux = auxiliary_primes(CURVE_249, 120)
        shuffled = aux[:]
        random.Random(7).shuffle(shuffled)
        assert alg_odd(CURVE_249, aux) == alg_odd(CURVE_249, shuffled)
        assert alg_related(CURVE_249, aux) == alg_related(CURVE_249, shuffled)

    def test_deterministic(self):
        a = possibly_nonsurjective(CURVE_249)
        b = possibly_nonsurjective(CURVE_249)
        assert a == b
