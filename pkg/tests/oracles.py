"""Independent brute-force oracles used only by the test suite.

Each oracle deliberately avoids the code path of the operation it checks:
resultants via Bareiss elimination on the literal Sylvester matrix, root
powering by explicit root manipulation, factorization of small-field
polynomials by distinct-degree splitting, point counts by literal enumeration
of affine solutions.
"""

from __future__ import annotations

from fractions import Fraction

from g2image.arith import IntPoly


def sylvester_resultant(p: IntPoly, q: IntPoly) -> int:
    """det of the Sylvester matrix, by fraction-free Bareiss elimination."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        raise ValueError("zero polynomial")
    if m == 0:
        return p.lc ** n
    if n == 0:
        return q.lc ** m
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - i - n - 1))
    # Bareiss
    a = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[size - 1][size - 1]


def poly_from_roots(roots, lc: int = 1) -> IntPoly:
    out = IntPoly([lc])
    for r in roots:
        out = out * IntPoly([-r, 1])
    return out


def power_roots_by_roots(roots, f: int) -> IntPoly:
    """Monic polynomial with roots r^f, for explicitly known integer roots."""
    return poly_from_roots([r ** f for r in roots])


# -- polynomials over F_ell (tuple coefficients, ascending) -----------------


def _pmod_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pmod_mul(a, b, ell):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % ell
    return _pmod_trim(out)


def pmod_divmod(a, b, ell):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], ell - 2, ell)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1] * inv % ell
        k = len(a) - 1 - db
        q[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % ell
    return _pmod_trim(q), _pmod_trim(a)


def pmod_gcd(a, b, ell):
    a, b = _pmod_trim(x % ell for x in a), _pmod_trim(x % ell for x in b)
    while b:
        _, r = pmod_divmod(a, b, ell)
        a, b = b, r
    if a:
        inv = pow(a[-1], ell - 2, ell)
        a = tuple(x * inv % ell for x in a)
    return a


def pmod_pow_x(e, mod_poly, ell):
    """x^e mod (mod_poly) over F_ell."""
    result = (1,)
    base = (0, 1)
    while e:
        if e & 1:
            result = pmod_divmod(pmod_mul(result, base, ell), mod_poly, ell)[1]
        base = pmod_divmod(pmod_mul(base, base, ell), mod_poly, ell)[1]
        e >>= 1
    return result


def factor_degrees_ddf(coeffs, ell):
    """Multiset of irreducible factor degrees (with multiplicity) over F_ell.

    Squarefree decomposition by repeated gcd with the derivative, then
    distinct-degree splitting on each squarefree part.  Independent of the
    production root-scan / quadratic-pair logic.
    """
    f = _pmod_trim(c % ell for c in coeffs)
    if len(f) <= 1:
        raise ValueError("constant polynomial")
    inv = pow(f[-1], ell - 2, ell)
    f = tuple(c * inv % ell for c in f)
    degrees = []
    mult = 1
    while len(f) > 1:
        deriv = _pmod_trim([(i * f[i]) % ell for i in range(1, len(f))])
        if not deriv:
            # f = g(x^ell) = g1(x)^ell over F_ell; recurse on the ell-th root
            f = tuple(f[i] for i in range(0, len(f), ell))
            mult *= ell
            continue
        sqfree, _ = pmod_divmod(f, pmod_gcd(f, deriv, ell), ell)
        g = sqfree
        d = 1
        while len(g) - 1 >= 2 * d:
            xe = pmod_pow_x(ell ** d, g, ell)
            diff = [xe[i] if i < len(xe) else 0 for i in range(max(len(xe), 2))]
            diff[1] = (diff[1] - 1) % ell
            common = pmod_gcd(g, _pmod_trim(diff), ell)
            if len(common) > 1:
                degrees.extend([d] * (((len(common) - 1) // d) * mult))
                g, _ = pmod_divmod(g, common, ell)
            d += 1
        if len(g) > 1:
            degrees.extend([len(g) - 1] * mult)
        f, _ = pmod_divmod(f, sqfree, ell)
    return sorted(degrees)


def naive_affine_count(f: IntPoly, h: IntPoly, p: int) -> int:
    """#{(x, y) in F_p^2 : y^2 + h(x) y = f(x)} by literal double loop."""
    count = 0
    for x in range(p):
        hx = h(x) % p
        fx = f(x) % p
        for y in range(p):
            if (y * y + hx * y - fx) % p == 0:
                count += 1
    return count


class Fp2:
    """F_{p^2} as F_p[u]/(u^2 - nr) for a fixed nonresidue nr, test-side."""

    def __init__(self, p):
        self.p = p
        squares = {pow(i, 2, p) for i in range(p)}
        self.nr = next(c for c in range(2, p) if c not in squares)

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield (a, b)

    def mul(self, z, w):
        a, b = z
        c, d = w
        p, nr = self.p, self.nr
        return ((a * c + b * d * nr) % p, (a * d + b * c) % p)

    def add(self, z, w):
        return ((z[0] + w[0]) % self.p, (z[1] + w[1]) % self.p)

    def scalar(self, c, z):
        return (c * z[0] % self.p, c * z[1] % self.p)

    def poly_eval(self, coeffs, x):
        acc = (0, 0)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), (c % self.p, 0))
        return acc


def naive_affine_count_fp2(f: IntPoly, h: IntPoly, p: int) -> int:
    """#{(x, y) in F_{p^2}^2 : y^2 + h(x) y = f(x)} by literal enumeration."""
    k = Fp2(p)
    count = 0
    for x in k.elements():
        hx = k.poly_eval(h.coeffs, x)
        fx = k.poly_eval(f.coeffs, x)
        for y in k.elements():
            lhs = k.add(k.mul(y, y), k.mul(hx, y))
            if lhs == fx:
                count += 1
    return count


def sqrt_table_affine_count_fp2(f: IntPoly, h: IntPoly, p: int) -> int:
    """Affine count over F_{p^2} via a squares multiplicity table.

    Completes the square (p odd) and reads multiplicities off a table built
    by one pass over all field elements; no quadratic character involved.
    """
    k = Fp2(p)
    table = {}
    for z in k.elements():
        sq = k.mul(z, z)
        table[sq] = table.get(sq, 0) + 1
    g = [(4 * f[i] + sum(h[j] * h[i - j] for j in range(i + 1))) for i in range(7)]
    inv4 = pow(4, p - 2, p)
    count = 0
    for x in k.elements():
        gx = k.poly_eval(g, x)
        v = k.scalar(inv4, gx)
        count += table.get(v, 0)
    return count
