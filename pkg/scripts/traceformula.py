"""Eichler-Selberg trace formula for weight-2 Hecke operators on Gamma_0(N).

Dev-side verifier for the Hecke fixture generator.  Computes Tr T_n on
S_2(Gamma_0(N)) for gcd(n, N) = 1 exactly, plus newspace traces via Moebius
inversion over the divisor lattice.  Conventions follow the classical
statement with weighted class numbers h_w(-3) = 1/3, h_w(-4) = 1/2.

Self-checks (run as a script): the level-1 trace vanishes for all n, traces
at n = 1 reproduce the genus of X_0(N), and eta-product newforms at levels
11, 14, 15, 20, 24, 27, 32, 36 match coefficient by coefficient.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from functools import lru_cache

sys.path.insert(0, __file__.rsplit("/", 2)[0] + "/src")

from g2image.arith import divisors, factor_multiplicities, factorize, is_prime


@lru_cache(maxsize=None)
def class_number(D: int) -> int:
    """h(D): primitive reduced binary quadratic forms of discriminant D < 0."""
    assert D < 0 and D % 4 in (0, 1)
    count = 0
    a = 1
    while a * a <= -D // 3:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
        a += 1
    return count


@lru_cache(maxsize=None)
def hw(D: int) -> Fraction:
    """Weighted class number: h(D)/1 except 1/3 at D=-3 and 1/2 at D=-4."""
    if D == -3:
        return Fraction(1, 3)
    if D == -4:
        return Fraction(1, 2)
    return Fraction(class_number(D))


@lru_cache(maxsize=None)
def psi(N: int) -> int:
    out = N
    for p in factor_multiplicities(N):
        out = out // p * (p + 1)
    return out


def _roots_mod_prime_power(t: int, n: int, q: int, e: int) -> int:
    """#{x mod q^e : x^2 - t x + n = 0}, by direct scan (q^e stays small)."""
    m = q ** e
    return sum(1 for x in range(m) if (x * x - t * x + n) % m == 0)


@lru_cache(maxsize=None)
def _lifted_root_images(t: int, n: int, q: int, a: int, b: int) -> int:
    """#{x mod q^a : the solution lifts mod q^(a+b)}: image of the solution
    set of x^2 - tx + n mod q^(a+b) under reduction mod q^a."""
    m = q ** (a + b)
    qa = q ** a
    return len({x % qa for x in range(m) if (x * x - t * x + n) % m == 0})


def count_quadratic_roots(t: int, n: int, M: int) -> int:
    """#{x mod M : x^2 - t x + n = 0}, multiplicative over prime powers."""
    if M == 1:
        return 1
    total = 1
    for q, e in factor_multiplicities(M).items():
        total *= _roots_mod_prime_power(t, n, q, e)
        if total == 0:
            return 0
    return total


def _mu_weight(t: int, f: int, n: int, N: int) -> int:
    """psi(N)/psi(N/N_f) times the number of residues mod N that solve
    x^2 - tx + n and lift to solutions mod N*N_f, with N_f = gcd(N, f).

    The lifting condition is what distinguishes non-maximal orders; counting
    plain solutions mod N*N_f overweights exactly the terms with
    gcd(f, N) > 1 (calibrated against the eta-product newforms).
    """
    Nf = math.gcd(N, f)
    weight = psi(N) // psi(N // Nf)
    count = 1
    for q, a in factor_multiplicities(N).items():
        b = 0
        nf = Nf
        while nf % q == 0:
            b += 1
            nf //= q
        count *= _lifted_root_images(t, n, q, a, b)
        if count == 0:
            return 0
    return weight * count


_SPF = None  # optional numpy smallest-prime-factor sieve, see ensure_spf


def ensure_spf(bound: int) -> None:
    """Build a smallest-prime-factor table up to bound (exclusive) so the
    elliptic-term square-divisor scans run in log time per discriminant."""
    global _SPF
    if _SPF is not None and len(_SPF) >= bound:
        return
    import numpy as np

    spf = np.arange(bound, dtype=np.int64)
    for i in range(2, int(bound ** 0.5) + 1):
        if spf[i] == i:
            sl = spf[i * i::i]
            np.minimum(sl, i, out=sl)
    _SPF = spf


def _factor_spf(D: int):
    out = {}
    while D > 1:
        p = int(_SPF[D])
        e = 0
        while D % p == 0:
            D //= p
            e += 1
        out[p] = e
    return out


def _square_divisors_with_fundamental(D: int):
    """Pairs (f, D/f^2) over f > 0 with f^2 | D and D/f^2 = 0 or 3 mod 4,
    where D = 4n - t^2 > 0 (so the quotient discriminant is -D/f^2)."""
    out = []
    if _SPF is not None and D < len(_SPF):
        fs = [1]
        for p, e in _factor_spf(D).items():
            fs = [f * p ** j for f in fs for j in range(e // 2 + 1)]
        for f in sorted(fs):
            d = D // (f * f)
            if d % 4 in (0, 3):
                out.append((f, d))
        return out
    f = 1
    while f * f <= D:
        if D % (f * f) == 0:
            d = D // (f * f)
            if d % 4 in (0, 3):
                out.append((f, d))
        f += 1
    return out


def trace_tn(N: int, n: int) -> int:
    """Tr T_n on S_2(Gamma_0(N)) for gcd(n, N) = 1."""
    if math.gcd(n, N) != 1:
        raise ValueError("trace formula implemented for gcd(n, N) = 1 only")
    sqrt_n = math.isqrt(n)
    is_square = sqrt_n * sqrt_n == n

    total = Fraction(0)
    # identity term
    if is_square:
        total += Fraction(psi(N), 12)

    # elliptic terms
    tmax = math.isqrt(4 * n - 1)
    elliptic = Fraction(0)
    for t in range(-tmax, tmax + 1):
        D = 4 * n - t * t
        inner = Fraction(0)
        for f, d in _square_divisors_with_fundamental(D):
            inner += hw(-d) * _mu_weight(t, f, n, N)
        elliptic += inner
    total -= elliptic / 2

    # hyperbolic terms
    hyper = Fraction(0)
    for d in divisors(n):
        dp = n // d
        if d > dp:
            continue
        c = 0
        for tau in divisors(N):
            g = math.gcd(tau, N // tau)
            if (d - dp) % g == 0:
                c += _phi(g)
        term = Fraction(min(d, dp) * c)
        if d == dp:
            term /= 2
        hyper += term
    total -= hyper

    # weight-2 correction
    total += sum(c for c in divisors(n) if math.gcd(N, n // c) == 1)

    if total.denominator != 1:
        raise ArithmeticError(f"non-integral trace at N={N}, n={n}: {total}")
    return int(total)


@lru_cache(maxsize=None)
def _phi(m: int) -> int:
    out = m
    for p in factor_multiplicities(m):
        out = out // p * (p - 1)
    return out


def genus_x0(N: int) -> int:
    """Genus of X_0(N), by the classical formula."""
    mult = factor_multiplicities(N)
    nu2 = 0 if N % 4 == 0 else _prod(1 + _kronecker_m4(p) for p in mult)
    nu3 = 0 if N % 9 == 0 else _prod(1 + _kronecker_m3(p) for p in mult)
    nuinf = sum(_phi(math.gcd(d, N // d)) for d in divisors(N))
    g12 = psi(N) - 3 * nu2 - 4 * nu3 - 6 * nuinf + 12
    assert g12 % 12 == 0
    return g12 // 12


def _prod(it):
    out = 1
    for v in it:
        out *= v
    return out


def _kronecker_m4(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _kronecker_m3(p: int) -> int:
    if p == 3:
        return 0
    if p == 2:
        return -1
    return 1 if p % 3 == 1 else -1


# (mu * mu)(p^k) = 1, -2, 1, 0, ... : Dirichlet inverse of the divisor count
def _mu_mu(n: int) -> int:
    out = 1
    for _, e in factor_multiplicities(n).items():
        if e == 1:
            out *= -2
        elif e == 2:
            out *= 1
        else:
            return 0
    return out


def trace_tn_new(N: int, n: int) -> int:
    """Tr T_n on S_2^new(Gamma_0(N)), by Moebius inversion of sigma_0."""
    return sum(_mu_mu(N // d) * trace_tn(d, n) for d in divisors(N))


def dim_new(N: int) -> int:
    return sum(_mu_mu(N // d) * genus_x0(d) for d in divisors(N))


# power sums of T_p eigenvalues on the newspace from traces of T_{p^i}
def newspace_power_sums(N: int, p: int, upto: int):
    """s_j = sum of lambda^j over T_p eigenvalues on S_2^new(Gamma_0(N)),
    j = 0..upto, using lambda^j = sum_i c_{j,i} u_i(lambda) where u_i is the
    eigenvalue of T_{p^i} (Chebyshev-like recursion u_i = l u_{i-1} - p u_{i-2})."""
    taus = [dim_new(N)] + [trace_tn_new(N, p ** i) for i in range(1, upto + 1)]
    # u_i as integer polynomials in lambda (ascending coefficient lists)
    u = [[1], [0, 1]]
    for i in range(2, upto + 1):
        prev = [0] + u[i - 1]
        prev2 = [c * p for c in u[i - 2]] + [0, 0]
        u.append([a - b for a, b in zip(prev + [0] * (len(prev2) - len(prev)), prev2)])
    sums = [taus[0]]
    for j in range(1, upto + 1):
        # express lambda^j in the u-basis by triangular reduction
        target = [0] * (j + 1)
        target[j] = 1
        coeffs = [0] * (j + 1)
        for i in range(j, -1, -1):
            c = target[i] if i < len(target) else 0
            coeffs[i] = c
            if c:
                for k, uk in enumerate(u[i]):
                    target[k] -= c * uk
        sums.append(sum(coeffs[i] * taus[i] for i in range(j + 1)))
    return sums


def newspace_charpoly(N: int, p: int):
    """Exact charpoly of T_p on S_2^new(Gamma_0(N)) via Newton identities.

    Feasible only while p^dim stays enumerable in the elliptic sum, so this
    is the verifier for small dimensions, not the production generator.
    """
    from g2image.arith import IntPoly, poly_from_power_sums

    m = dim_new(N)
    if m == 0:
        return IntPoly([1])
    s = newspace_power_sums(N, p, m)
    return poly_from_power_sums(s, m)


# -- eta-product oracles ------------------------------------------------------

ETA_NEWFORMS = {
    11: ((1, 2), (11, 2)),
    14: ((1, 1), (2, 1), (7, 1), (14, 1)),
    15: ((1, 1), (3, 1), (5, 1), (15, 1)),
    20: ((2, 2), (10, 2)),
    24: ((2, 1), (4, 1), (6, 1), (12, 1)),
    27: ((3, 2), (9, 2)),
    32: ((4, 2), (8, 2)),
    36: ((6, 4),),
}


def eta_product_coefficients(level: int, upto: int):
    """q-expansion coefficients a_1..a_upto of the eta-product newform."""
    spec = ETA_NEWFORMS[level]
    assert sum(m * r for m, r in spec) == 24
    series = [0] * (upto + 1)
    series[0] = 1
    for m, r in spec:
        for _ in range(r):
            # multiply by prod (1 - q^(m k)) via Euler's pentagonal theorem
            pent = [0] * (upto + 1)
            pent[0] = 1
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2 * m
                g2 = k * (3 * k + 1) // 2 * m
                if g1 > upto and g2 > upto:
                    break
                sign = -1 if k % 2 else 1
                if g1 <= upto:
                    pent[g1] += sign
                if g2 <= upto:
                    pent[g2] += sign
                k += 1
            series = _series_mul(series, pent, upto)
    # the eta product is q * series
    return [0] + series[: upto]


def _series_mul(a, b, upto):
    out = [0] * (upto + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if i + j > upto:
                    break
                if y:
                    out[i + j] += x * y
    return out


def run_self_checks(verbose=True):
    # level 1 has no cusp forms: the formula must return 0 for every n
    for n in range(1, 120):
        assert trace_tn(1, n) == 0, f"level-1 trace nonzero at n={n}"

    # trace of T_1 is the dimension = genus
    for N in list(range(1, 130)) + [169, 217, 249, 529]:
        assert trace_tn(N, 1) == genus_x0(N), f"dim mismatch at N={N}"

    # newspace dimensions at the levels the pipeline needs
    expected_dims = {23: 2, 31: 2, 49: 1, 217: 15, 14: 1, 21: 1, 27: 1, 28: 0,
                     36: 1, 42: 1, 54: 2, 63: 3, 81: 2, 84: 2, 98: 3, 108: 1, 126: 2}
    for N, dim in expected_dims.items():
        got = dim_new(N)
        assert got == dim, f"dim S_2^new({N}) = {got}, expected {dim}"

    # eta products pin every Hecke eigenvalue at eight levels: check all
    # coprime indices up to 60 plus prime squares and cubes
    for level in ETA_NEWFORMS:
        coeffs = eta_product_coefficients(level, 64)
        for n in range(1, 65):
            if math.gcd(n, level) == 1:
                assert trace_tn(level, n) == coeffs[n], (
                    f"eta mismatch: level {level}, n={n}")
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59):
            if level % p == 0:
                continue
            ap = coeffs[p]
            ap2 = ap * ap - p
            assert trace_tn(level, p * p) == ap2, (
                f"eta p^2 mismatch at level {level}, p={p}")
            if p <= 13:
                assert trace_tn(level, p ** 3) == ap * ap2 - p * ap, (
                    f"eta p^3 mismatch at level {level}, p={p}")

    # Weil bound on newspace traces
    for N in (23, 31, 49, 217):
        for p in (3, 5, 11, 13):
            if N % p == 0:
                continue
            t = trace_tn_new(N, p)
            assert abs(t) <= dim_new(N) * 2 * math.sqrt(p) + 1e-9

    if verbose:
        print("trace formula self-checks passed")


if __name__ == "__main__":
    run_self_checks()
