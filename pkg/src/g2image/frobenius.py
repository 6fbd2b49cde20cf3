"""Point counting on genus-2 curves over small prime fields and the integral
Frobenius characteristic polynomial.

Curves come as y^2 + h(x) y = f(x); all counting happens on the completed
square y^2 = g(x) with g = 4f + h^2, which is why characteristic 2 is never
used as an auxiliary prime.  Counting is naive: one quadratic-character sweep,
O(p) field operations for r = 1 and O(p^2) for r = 2.  Auxiliary primes stay
below ~1000, so nothing faster is warranted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import IntPoly


@dataclass(frozen=True)
class CurveModel:
    """y^2 + h(x) y = f(x) with deg f <= 6, deg h <= 3, known conductor."""

    f: IntPoly
    h: IntPoly
    conductor: int
    label: Optional[str] = None

    def __post_init__(self):
        if self.f.degree > 6:
            raise ValueError("deg f must be <= 6")
        if self.h.degree > 3:
            raise ValueError("deg h must be <= 3")
        if self.conductor < 1:
            raise ValueError("conductor must be >= 1")
        g = self.g
        if g.degree not in (5, 6):
            raise ValueError("4f + h^2 must have degree 5 or 6")
        if g.discriminant() == 0:
            raise ValueError("4f + h^2 must be squarefree (smooth genus-2 model)")

    @property
    def g(self) -> IntPoly:
        """Completed square 4f + h^2."""
        return 4 * self.f + self.h * self.h

    def describe(self) -> str:
        return self.label or f"y^2+({self.h})y={self.f} (N={self.conductor})"


@dataclass(frozen=True)
class FrobeniusPoly:
    """P_p(t) = t^4 - a t^3 + b t^2 - p a t + p^2 at a good prime p.

    The functional-equation shape is structural; only (p, a, b) is stored.
    Construction enforces the Weil bounds |a| <= 4 sqrt(p), |b| <= 6p.
    """

    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.a * self.a > 16 * self.p:
            raise ValueError(f"trace {self.a} violates the Weil bound at p={self.p}")
        if abs(self.b) > 6 * self.p:
            raise ValueError(f"middle coefficient {self.b} violates the Weil bound at p={self.p}")

    def poly(self) -> IntPoly:
        p, a, b = self.p, self.a, self.b
        return IntPoly([p * p, -p * a, b, -a, 1])


@lru_cache(maxsize=None)
def _disc_and_lc(g_coeffs: tuple):
    g = IntPoly(g_coeffs)
    return g.discriminant(), g.lc


def is_good_prime(curve: CurveModel, p: int) -> bool:
    """Odd p not dividing lc(4f + h^2) nor disc(4f + h^2).

    These are the primes where the completed-square model stays a smooth
    genus-2 curve, which is all the pipeline ever samples.
    """
    if p == 2:
        return False
    disc, lc = _disc_and_lc(curve.g.coeffs)
    return disc % p != 0 and lc % p != 0


def _legendre_table(p: int) -> np.ndarray:
    """chi(v) for v in 0..p-1 with chi(0) = 0, as an int64 array."""
    table = np.full(p, -1, dtype=np.int64)
    table[0] = 0
    squares = np.arange(1, p, dtype=np.int64) ** 2 % p
    table[squares] = 1
    return table


def least_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue mod odd prime p."""
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return c
    raise ValueError("no nonresidue found (p must be an odd prime > 2)")


def count_points(curve: CurveModel, p: int, r: int) -> int:
    """#C(F_{p^r}) on the smooth projective model, r in {1, 2}.

    Affine part is sum over x of 1 + chi(g(x)) with chi the quadratic
    character (chi(0) = 0); infinity contributes 1 point when deg g = 5 and
    1 + chi(lc g) points when deg g = 6.  Over F_{p^2} the character is
    evaluated through the norm: chi_{p^2}(z) = chi_p(N(z)).
    """
    if r not in (1, 2):
        raise ValueError("r must be 1 or 2")
    if not is_good_prime(curve, p):
        raise ValueError(f"{p} is not a good prime for {curve.describe()}")
    g = curve.g
    if r == 1:
        count = 0
        for x in range(p):
            v = g(x) % p
            if v == 0:
                count += 1
            else:
                count += 1 + pow_legendre(v, p)
        count += _points_at_infinity(g, p, 1)
        return count

    nr = least_nonresidue(p)
    leg = _legendre_table(p)
    A, B = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    A = A.ravel()
    B = B.ravel()
    va = np.zeros_like(A)
    vb = np.zeros_like(B)
    for c in reversed(g.coeffs):
        # (va + vb u)(A + B u) + c with u^2 = nr
        na = (va * A + (vb * B % p) * nr) % p
        nb = (va * B + vb * A) % p
        va = (na + c) % p
        vb = nb
    norm = (va * va - nr * vb * vb) % p
    chi = leg[norm]
    chi[(va == 0) & (vb == 0)] = 0
    count = int(p * p + chi.sum())
    count += _points_at_infinity(g, p, 2)
    return count


def pow_legendre(v: int, p: int) -> int:
    """Legendre symbol of v mod odd prime p via Euler's criterion."""
    t = pow(v % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def _points_at_infinity(g: IntPoly, p: int, r: int) -> int:
    if g.degree == 5:
        return 1
    lc = g.lc % p
    if r == 1:
        return 1 + pow_legendre(lc, p)
    # lc is a nonzero square in F_{p^2} always: norm of lc is lc^2
    return 2


@lru_cache(maxsize=None)
def frobenius_poly(curve: CurveModel, p: int) -> FrobeniusPoly:
    """Integral Frobenius characteristic polynomial data at a good prime.

    a = p + 1 - #C(F_p); b = (a^2 - (p^2 + 1 - #C(F_{p^2}))) / 2, with the
    halving exact.  A remainder would mean the point counts are wrong, so it
    raises rather than rounds.
    """
    n1 = count_points(curve, p, 1)
    n2 = count_points(curve, p, 2)
    a = p + 1 - n1
    num = a * a - (p * p + 1 - n2)
    b, rem = divmod(num, 2)
    if rem:
        raise ArithmeticError(
            f"point-counting bug: a^2 - (p^2+1-#C(F_p^2)) odd at p={p} for {curve.describe()}"
        )
    return FrobeniusPoly(p=p, a=a, b=b)


def good_primes(curve: CurveModel, bound: int, exclude_conductor: bool = False):
    """Good primes below bound in increasing order.

    With exclude_conductor, primes dividing N are dropped as well (the sieve's
    auxiliary-prime pool); the verification scan keeps them when they are good
    for the curve.
    """
    from .arith import primes_below

    for p in primes_below(bound):
        if not is_good_prime(curve, p):
            continue
        if exclude_conductor and curve.conductor % p == 0:
            continue
        yield p
