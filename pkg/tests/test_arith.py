import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2image.arith import (
    IntPoly,
    divisors,
    factorize,
    is_prime,
    is_smooth,
    multiplicative_order,
    power_roots,
    primes_below,
    resultant,
    square_part,
)

from .oracles import poly_from_roots, power_roots_by_roots, sylvester_resultant

x = IntPoly([0, 1])


class TestResultant:
    def test_linear_pair(self):
        assert resultant(IntPoly([-2, 1]), IntPoly([-3, 1])) == -1

    def test_shared_roots(self):
        p = IntPoly([1, 0, 1])
        assert resultant(p, p) == 0

    def test_quadratic_pair(self):
        # roots +-sqrt(2) against t^2-3: (2-3)(2-3) = 1, frozen from the
        # Sylvester oracle before wiring up the subresultant path
        p, q = IntPoly([-2, 0, 1]), IntPoly([-3, 0, 1])
        assert sylvester_resultant(p, q) == 1
        assert resultant(p, q) == 1

    def test_constant_cases(self):
        assert resultant(IntPoly([5]), IntPoly([1, 2, 3])) == 25
        assert resultant(IntPoly([1, 2, 3]), IntPoly([7])) == 49

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            resultant(IntPoly([]), IntPoly([1]))
        with pytest.raises(ValueError):
            resultant(IntPoly([1]), IntPoly([]))

    @given(
        st.lists(st.integers(-9, 9), min_size=1, max_size=6),
        st.lists(st.integers(-9, 9), min_size=1, max_size=6),
    )
    @settings(max_examples=300, deadline=None)
    def test_matches_sylvester_oracle(self, ac, bc):
        p, q = IntPoly(ac), IntPoly(bc)
        if p.is_zero or q.is_zero:
            return
        assert resultant(p, q) == sylvester_resultant(p, q)

    @given(
        st.lists(st.integers(-6, 6), min_size=2, max_size=5),
        st.lists(st.integers(-6, 6), min_size=2, max_size=5),
        st.booleans(),
        st.integers(-5, 5),
    )
    @settings(max_examples=200, deadline=None)
    def test_zero_iff_common_factor(self, ra, rb, share, r):
        # random products of linear factors, optionally sharing the root r
        p = poly_from_roots(ra + ([r] if share else []))
        q = poly_from_roots(rb + ([r] if share else []))
        res = resultant(p, q)
        common = share or bool(set(ra) & set(rb))
        assert (res == 0) == common


class TestPowerRoots:
    def test_identity(self):
        p = IntPoly([6, -5, 1])
        assert power_roots(p, 1) == p

    def test_square_of_two_three(self):
        got = power_roots(IntPoly([6, -5, 1]), 2)
        assert got == power_roots_by_roots([2, 3], 2)
        assert got == IntPoly([36, -13, 1])

    def test_all_roots_one(self):
        p = poly_from_roots([1, 1, 1, 1])
        assert power_roots(p, 3) == p

    def test_non_monic_rejected(self):
        with pytest.raises(ValueError):
            power_roots(IntPoly([1, 2]), 2)

    @given(st.lists(st.integers(-8, 8), min_size=1, max_size=5), st.integers(1, 4))
    @settings(max_examples=200, deadline=None)
    def test_matches_root_oracle(self, roots, f):
        assert power_roots(poly_from_roots(roots), f) == power_roots_by_roots(roots, f)

    @given(
        st.lists(st.integers(-5, 5), min_size=1, max_size=4),
        st.integers(1, 3),
        st.integers(1, 3),
    )
    @settings(max_examples=150, deadline=None)
    def test_composition(self, roots, a, b):
        p = poly_from_roots(roots)
        assert power_roots(power_roots(p, a), b) == power_roots(p, a * b)

    @given(st.integers(-6, 6), st.integers(-15, 15), st.integers(1, 8), st.integers(2, 5))
    @settings(max_examples=150, deadline=None)
    def test_functional_equation_shape_preserved(self, a, b, p, f):
        # quartics t^4 - a t^3 + b t^2 - p a t + p^2 have roots multiplying in
        # pairs to p; the f-th power-roots polynomial must pair to p^f:
        # constant coefficient p^(2f) and t-coefficient p^f times the
        # t^3-coefficient
        quartic = IntPoly([p * p, -p * a, b, -a, 1])
        out = power_roots(quartic, f)
        assert out[0] == p ** (2 * f)
        assert out[1] == p ** f * out[3]


class TestFactorize:
    def test_249(self):
        assert factorize(249) == [3, 83]

    def test_one(self):
        assert factorize(1) == []

    def test_47089(self):
        assert factorize(47089) == [7, 7, 31, 31]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            factorize(0)

    def test_large_semiprime(self):
        p, q = 1000003, 1000033
        assert factorize(p * q) == [p, q]

    @given(st.integers(1, 10**9))
    @settings(max_examples=150, deadline=None)
    def test_product_and_primality(self, n):
        fs = factorize(n)
        prod = 1
        for p in fs:
            assert is_prime(p)
            prod *= p
        assert prod == n


class TestSquarePart:
    def test_squarefree(self):
        assert square_part(249) == 1

    def test_perfect_square(self):
        assert square_part(47089) == 217

    def test_976(self):
        # 976 = 2^4 * 61; oracle: largest m <= sqrt(n) with m^2 | n
        n = 976
        expected = max(m for m in range(1, int(n**0.5) + 1) if n % (m * m) == 0)
        assert expected == 4
        assert square_part(n) == 4

    @given(st.integers(1, 200000))
    @settings(max_examples=100, deadline=None)
    def test_exhaustive_oracle(self, n):
        expected = max(m for m in range(1, int(n**0.5) + 2) if n % (m * m) == 0)
        assert square_part(n) == expected


class TestMultiplicativeOrder:
    def test_modulus_one(self):
        assert multiplicative_order(17, 1) == 1

    def test_two_mod_seven(self):
        assert multiplicative_order(2, 7) == 3

    def test_five_mod_217(self):
        # brute-force oracle
        k, v = 1, 5 % 217
        while v != 1:
            v = v * 5 % 217
            k += 1
        assert k == 6
        assert multiplicative_order(5, 217) == 6

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError):
            multiplicative_order(6, 9)

    @given(st.integers(2, 500), st.integers(2, 500))
    @settings(max_examples=100, deadline=None)
    def test_definition(self, p, m):
        import math

        if math.gcd(p, m) != 1:
            return
        k = multiplicative_order(p, m)
        assert pow(p, k, m) == 1
        for d in range(1, k):
            if k % d == 0:
                assert pow(p, d, m) != 1


def test_primes_below():
    assert primes_below(20) == (2, 3, 5, 7, 11, 13, 17, 19)
    assert primes_below(2) == ()


def test_is_smooth():
    assert is_smooth(2**5 * 3 * 7**2)
    assert not is_smooth(11)
    assert not is_smooth(0)
    assert is_smooth(-210)


def test_divisors():
    assert divisors(47089) == [1, 7, 31, 49, 217, 961, 1519, 6727, 47089]
    assert divisors(1) == [1]


def test_intpoly_invariants():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([]).degree == -1
    assert IntPoly([0, 0]).is_zero
    p = IntPoly([2, 0, 1])
    assert p.degree == 2 and p(3) == 11 and p(-1) == 3


def test_discriminant_known_values():
    # disc(x^2 + bx + c) = b^2 - 4c
    assert IntPoly([5, 3, 1]).discriminant() == 9 - 20
    # disc of the completed square of the conductor-249 curve: 2^12 * 249
    g = IntPoly([1, 4, 4, 2, 0, 0, 1])
    assert g.discriminant() == 2**12 * 249
