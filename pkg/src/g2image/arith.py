"""Exact integer and polynomial arithmetic primitives.

Everything here works over Z with arbitrary-precision integers; intermediate
values routinely exceed 64 bits (resultants of root-powered quartics reach
magnitudes around p^240), so no fixed-width shortcuts anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


class IntPoly:
    """Univariate polynomial over Z, coefficients stored in ascending degree.

    Immutable.  The zero polynomial has an empty coefficient tuple and
    degree -1; otherwise the top coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+" if c > 0 else "-") + term)
        return "".join(parts)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("negative power")
        out = IntPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        """Evaluate by Horner; works for ints and Fractions alike."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k."""
        return IntPoly((0,) * k + self.coeffs)

    def discriminant(self) -> int:
        """disc(P) = (-1)^(d(d-1)/2) Res(P, P') / lc(P) for d = deg P."""
        d = self.degree
        if d < 1:
            raise ValueError("discriminant needs degree >= 1")
        r = resultant(self, self.derivative())
        sign = -1 if (d * (d - 1) // 2) % 2 else 1
        q, rem = divmod(sign * r, self.lc)
        if rem:
            raise ArithmeticError("non-exact discriminant division")
        return q


def resultant(p: IntPoly, q: IntPoly) -> int:
    """Resultant of nonzero p, q under Res(P,Q) = lc(P)^deg(Q) * prod Q(alpha_i).

    Fraction-free subresultant PRS (Cohen, Alg. 3.3.7); intermediate
    coefficients stay at subresultant size instead of doubling every step.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of the zero polynomial is not defined")
    if p.degree == 0:
        return p.lc ** q.degree
    if q.degree == 0:
        return q.lc ** p.degree

    a, b = p, q
    s = 1
    if a.degree < b.degree:
        if (a.degree % 2) and (b.degree % 2):
            s = -s
        a, b = b, a
    g, h = 1, 1
    while True:
        da, db = a.degree, b.degree
        delta = da - db
        if (da % 2) and (db % 2):
            s = -s
        r = _prem(a, b)
        a = b
        denom = g * h ** delta
        b = IntPoly([_exact_div(c, denom) for c in r.coeffs])
        if b.is_zero:
            return 0
        g = a.lc
        if delta > 0:
            h = _exact_div(g ** delta, h ** (delta - 1))
        if b.degree == 0:
            da = a.degree
            res = _exact_div(b.lc ** da, h ** (da - 1)) if da >= 1 else b.lc
            return s * res


def _prem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a reduced mod b."""
    db = b.degree
    lb = b.lc
    r = list(a.coeffs)
    e = a.degree - db + 1
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        top = r[-1]
        k = len(r) - 1 - db
        r = [c * lb for c in r]
        for i in range(db + 1):
            r[k + i] -= top * b.coeffs[i]
        e -= 1
    rem = IntPoly(r)
    if e > 0:
        rem = rem * (lb ** e)
    return rem


def _exact_div(a: int, d: int) -> int:
    q, r = divmod(a, d)
    if r:
        raise ArithmeticError("non-exact division in subresultant scheme")
    return q


def power_sums(p: IntPoly, upto: int) -> list:
    """Power sums s_k = sum of alpha^k over roots of monic p, for k = 0..upto.

    Newton's identities run as an integer linear recursion on the
    coefficients, so every value is exact.
    """
    if not p.is_monic:
        raise ValueError("power_sums requires a monic polynomial")
    n = p.degree
    a = p.coeffs
    s = [n]
    for k in range(1, upto + 1):
        acc = -k * a[n - k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            acc -= a[n - i] * s[k - i]
        s.append(acc)
    return s


def poly_from_power_sums(s: list, n: int) -> IntPoly:
    """Monic degree-n polynomial with power sums s[1..n] (inverse Newton).

    Division by k appears mid-recursion; the final coefficients must be
    integers and that is asserted.
    """
    e = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        e.append(acc / k)
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        v = (-1) ** k * e[k]
        if v.denominator != 1:
            raise ArithmeticError("power sums do not define an integral polynomial")
        coeffs[n - k] = int(v)
    return IntPoly(coeffs)


def power_roots(p: IntPoly, f: int) -> IntPoly:
    """Monic polynomial whose roots are the f-th powers of the roots of p.

    The k-th power sum of the output equals the (f*k)-th power sum of the
    input; Newton's identities rebuild the coefficients exactly.
    """
    if not p.is_monic:
        raise ValueError("power_roots requires a monic polynomial")
    if f < 1:
        raise ValueError("power_roots requires f >= 1")
    if f == 1 or p.degree == 0:
        return p
    n = p.degree
    s = power_sums(p, f * n)
    return poly_from_power_sums([n] + [s[f * k] for k in range(1, n + 1)], n)


# -- integer machinery -----------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set covers all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed % n, (seed % (n - 1)) + 1, 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> list:
    """Prime factorization with multiplicity, sorted ascending.

    Trial division handles everything a conductor realistically contains;
    Brent rho covers the rest of the 64-bit range and beyond.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out = []
    for p in (2, 3, 5):
        while n % p == 0:
            out.append(p)
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d < 100000:
        while n % d == 0:
            out.append(d)
            n //= d
        d += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        g = _brent_rho(m)
        stack.extend((g, m // g))
    return sorted(out)


def factor_multiplicities(n: int) -> dict:
    """{prime: exponent} form of factorize(n)."""
    out = {}
    for p in factorize(n):
        out[p] = out.get(p, 0) + 1
    return out


def square_part(n: int) -> int:
    """Largest m with m^2 | n."""
    m = 1
    for p, e in factor_multiplicities(n).items():
        m *= p ** (e // 2)
    return m


def radical(n: int) -> int:
    """Product of the distinct primes dividing n."""
    r = 1
    for p in factor_multiplicities(n):
        r *= p
    return r


def multiplicative_order(p: int, m: int) -> int:
    """Least k >= 1 with p^k = 1 mod m; the trivial group gives 1."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return 1
    if math.gcd(p, m) != 1:
        raise ValueError(f"{p} is not invertible mod {m}")
    phi = 1
    for q, e in factor_multiplicities(m).items():
        phi *= (q - 1) * q ** (e - 1)
    order = phi
    for q in set(factorize(phi)):
        while order % q == 0 and pow(p, order // q, m) == 1:
            order //= q
    return order


@lru_cache(maxsize=None)
def primes_below(bound: int) -> tuple:
    """All primes < bound, by sieve of Eratosthenes."""
    if bound <= 2:
        return ()
    sieve = bytearray([1]) * bound
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return tuple(i for i in range(bound) if sieve[i])


def is_smooth(n: int, bound: int = 7) -> bool:
    """True when every prime factor of |n| is <= bound; 0 is not smooth."""
    n = abs(n)
    if n == 0:
        return False
    for p in primes_below(bound + 1):
        while n % p == 0:
            n //= p
    return n == 1


def divisors(n: int) -> list:
    """All positive divisors of n, ascending."""
    ds = [1]
    for p, e in factor_multiplicities(n).items():
        ds = [d * p ** j for d in ds for j in range(e + 1)]
    return sorted(ds)
