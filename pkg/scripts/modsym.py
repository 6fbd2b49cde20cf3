"""Weight-2 modular symbols for Gamma_0(N): exact Hecke charpolys.

Dev-side generator for the Hecke fixture.  Pipeline per (level, prime):

  1. Manin symbols on P^1(Z/N) with the 2-term and 3-term relations, reduced
     mod several large machine primes q (the quotient dimension must equal
     2g + (number of cusps) - 1, computed independently from the genus
     formulas; primes where the mod-q rank degenerates are skipped).
  2. T_p via Merel's family of determinant-p integer matrices
     {(a,b;c,d) : ad - bc = p, a > b >= 0, d > c >= 0}, dropping image pairs
     that leave P^1(Z/N).
  3. Characteristic polynomial mod q by Hessenberg reduction, then CRT over
     the q's against an a-priori coefficient bound (all eigenvalues have
     absolute value at most p + 1).
  4. The boundary part contributes (z - (p+1))^(cusps - 1) exactly; dividing
     it off and taking an exact polynomial square root leaves the charpoly
     of T_p on S_2(Gamma_0(N)).  Both steps assert exactness, so a wrong
     Eisenstein ansatz or any upstream bug fails loudly instead of producing
     wrong data.

New-space charpolys follow by Moebius inversion over the divisor lattice
(exact polynomial division).
"""

from __future__ import annotations

import math
import sys
from functools import lru_cache

sys.path.insert(0, __file__.rsplit("/", 2)[0] + "/src")

from g2image.arith import IntPoly, divisors, factor_multiplicities, primes_below

from traceformula import genus_x0, _phi  # noqa: E402


@lru_cache(maxsize=None)
def num_cusps(N: int) -> int:
    return sum(_phi(math.gcd(d, N // d)) for d in divisors(N))


@lru_cache(maxsize=8)
def p1_data(N: int):
    """(reps, index) for P^1(Z/N): canonical pair list and a full lookup
    table over all residue pairs with gcd(c, d, N) = 1."""
    units = [u for u in range(1, N) if math.gcd(u, N) == 1] or [1]
    canon_of = {}
    reps = []
    for c in range(N):
        gc = math.gcd(c, N)
        for d in range(N):
            if math.gcd(gc, math.gcd(d, N)) != 1:
                continue
            best = min(((u * c) % N, (u * d) % N) for u in units)
            if best == (c, d):
                canon_of[(c, d)] = len(reps)
                reps.append(best)
    index = {}
    for c in range(N):
        gc = math.gcd(c, N)
        for d in range(N):
            if math.gcd(gc, math.gcd(d, N)) != 1:
                continue
            best = min(((u * c) % N, (u * d) % N) for u in units)
            index[(c, d)] = canon_of[best]
    return reps, index


def _act(pair, g, N):
    c, d = pair
    return ((c * g[0][0] + d * g[1][0]) % N, (c * g[0][1] + d * g[1][1]) % N)


_S = ((0, -1), (1, 0))
_R = ((0, -1), (1, -1))


@lru_cache(maxsize=8)
def quotient_mod(N: int, q: int):
    """Projection of Manin symbols onto a basis of the relation quotient,
    mod q.  Returns (basis_indices, proj) with proj[i] a coefficient list
    over the basis for symbol i, or None if the mod-q rank degenerates."""
    reps, index = p1_data(N)
    n = len(reps)
    rows = set()
    for i, u in enumerate(reps):
        j = index[_act(u, _S, N)]
        row = [0] * n
        row[i] += 1
        row[j] += 1
        rows.add(tuple(c % q for c in row))
        j1 = index[_act(u, _R, N)]
        j2 = index[_act(_act(u, _R, N), _R, N)]
        row = [0] * n
        row[i] += 1
        row[j1] += 1
        row[j2] += 1
        rows.add(tuple(c % q for c in row))
    mat = [list(r) for r in rows]
    # row echelon mod q
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, q)
        mat[rank] = [v * inv % q for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(mat[r][j] - f * mat[rank][j]) % q for j in range(n)]
        pivots.append(col)
        rank += 1
    expected_dim = 2 * genus_x0(N) + num_cusps(N) - 1
    if n - rank != expected_dim:
        return None
    free = [c for c in range(n) if c not in pivots]
    free_pos = {c: k for k, c in enumerate(free)}
    proj = [None] * n
    for k, c in enumerate(free):
        vec = [0] * len(free)
        vec[k] = 1
        proj[c] = vec
    for r, c in enumerate(pivots):
        vec = [0] * len(free)
        for fc in free:
            if mat[r][fc]:
                vec[free_pos[fc]] = (-mat[r][fc]) % q
        proj[c] = vec
    return free, proj


@lru_cache(maxsize=None)
def merel_family(p: int):
    """Determinant-p integer matrices with a > b >= 0, d > c >= 0."""
    fam = []
    for a in range(1, p + 1):
        for b in range(0, a):
            cmax = (p - 1) // (a - b)
            for c in range(0, cmax + 1):
                num = p + b * c
                if num % a == 0:
                    d = num // a
                    if d > c:
                        fam.append(((a, b), (c, d)))
    return fam


def hecke_matrix_mod(N: int, p: int, q: int):
    """Matrix of T_p mod q on the Manin-symbol quotient basis, or None."""
    data = quotient_mod(N, q)
    if data is None:
        return None
    free, proj = data
    reps, index = p1_data(N)
    m = len(free)
    fam = merel_family(p)
    cols = []
    for bcol, sym_idx in enumerate(free):
        u = reps[sym_idx]
        acc = [0] * m
        for g in fam:
            c2 = (u[0] * g[0][0] + u[1] * g[1][0]) % N
            d2 = (u[0] * g[0][1] + u[1] * g[1][1]) % N
            if math.gcd(math.gcd(c2, d2), N) != 1:
                continue
            vec = proj[index[(c2, d2)]]
            for k in range(m):
                if vec[k]:
                    acc[k] = (acc[k] + vec[k]) % q
        cols.append(acc)
    # entries[i][j] = coefficient of basis_i in T_p(basis_j)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def charpoly_mod(M, q):
    """det(zI - M) mod q by Hessenberg reduction; ascending coefficients."""
    n = len(M)
    H = [row[:] for row in M]
    for col in range(n - 2):
        piv = next((r for r in range(col + 1, n) if H[r][col] % q), None)
        if piv is None:
            continue
        if piv != col + 1:
            H[col + 1], H[piv] = H[piv], H[col + 1]
            for r in range(n):
                H[r][col + 1], H[r][piv] = H[r][piv], H[r][col + 1]
        inv = pow(H[col + 1][col], -1, q)
        for r in range(col + 2, n):
            f = H[r][col] * inv % q
            if f:
                for j in range(n):
                    H[r][j] = (H[r][j] - f * H[col + 1][j]) % q
                for i in range(n):
                    H[i][col + 1] = (H[i][col + 1] + f * H[i][r]) % q
    # charpoly of Hessenberg matrix by the standard recurrence
    polys = [[1]]
    for k in range(1, n + 1):
        # poly for leading k x k block
        term = [0] + polys[k - 1]
        diag = H[k - 1][k - 1]
        term = [(term[i] - diag * (polys[k - 1][i] if i < len(polys[k - 1]) else 0)) % q
                for i in range(k + 1)]
        prod = 1
        for i in range(k - 2, -1, -1):
            prod = prod * H[i + 1][i] % q
            coef = H[i][k - 1] * prod % q
            if coef:
                base = polys[i]
                for j in range(len(base)):
                    term[j] = (term[j] - coef * base[j]) % q
        polys.append(term)
    return polys[n]


_CRT_PRIMES = tuple(p for p in primes_below(2 ** 21) if p > 2 ** 20 and p % 2 == 1)[:64]


def hecke_charpoly_full(N: int, p: int) -> IntPoly:
    """Exact charpoly of T_p on the full Manin-symbol quotient, by CRT."""
    expected_dim = 2 * genus_x0(N) + num_cusps(N) - 1
    if expected_dim == 0:
        return IntPoly([1])
    bound = 2 * (2 * (p + 1)) ** expected_dim
    residues = []
    moduli = []
    acc = 1
    for q in _CRT_PRIMES:
        M = hecke_matrix_mod(N, p, q)
        if M is None:
            continue
        residues.append(charpoly_mod(M, q))
        moduli.append(q)
        acc *= q
        if acc > 2 * bound:
            break
    else:
        raise RuntimeError("ran out of CRT primes")
    coeffs = []
    for k in range(expected_dim + 1):
        x = 0
        m = 1
        for r, q in zip(residues, moduli):
            # incremental CRT
            t = (r[k] - x) * pow(m, -1, q) % q
            x += m * t
            m *= q
        if x > m // 2:
            x -= m
        coeffs.append(x)
    return IntPoly(coeffs)


def _poly_exact_div(a: IntPoly, b: IntPoly) -> IntPoly:
    """a / b for monic b, asserting zero remainder."""
    if not b.is_monic:
        raise ValueError("divisor must be monic")
    rem = list(a.coeffs)
    db = b.degree
    out = [0] * (len(rem) - db)
    for k in range(len(rem) - db - 1, -1, -1):
        c = rem[db + k]
        out[k] = c
        if c:
            for i in range(db + 1):
                rem[k + i] -= c * b.coeffs[i]
    if any(rem[:db]):
        raise ArithmeticError("non-exact polynomial division")
    return IntPoly(out)


def _poly_sqrt(c: IntPoly) -> IntPoly:
    """Monic square root of a monic even-degree polynomial, asserted exact."""
    if not c.is_monic or c.degree % 2:
        raise ValueError("need a monic even-degree polynomial")
    g = c.degree // 2
    h = [0] * (g + 1)
    h[g] = 1
    for k in range(g - 1, -1, -1):
        s = sum(h[i] * h[g + k - i] for i in range(k + 1, g) if 0 <= g + k - i <= g)
        num = c[g + k] - s
        if num % 2:
            raise ArithmeticError("polynomial is not a perfect square (parity)")
        h[k] = num // 2
    H = IntPoly(h)
    if H * H != c:
        raise ArithmeticError("polynomial is not a perfect square")
    return H


def cusp_charpoly(N: int, p: int) -> IntPoly:
    """Exact charpoly of T_p on S_2(Gamma_0(N)); degree = genus of X_0(N)."""
    if math.gcd(p, N) != 1:
        raise ValueError("p must be coprime to N")
    full = hecke_charpoly_full(N, p)
    boundary = IntPoly([-(p + 1), 1]) ** (num_cusps(N) - 1)
    cusp_sq = _poly_exact_div(full, boundary)
    return _poly_sqrt(cusp_sq)


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


def new_charpoly(N: int, p: int) -> IntPoly:
    """Exact charpoly of T_p on S_2^new(Gamma_0(N)), via the divisor lattice."""
    numerator = IntPoly([1])
    denominator = IntPoly([1])
    for d in divisors(N):
        e = _mu_mu(N // d)
        if e == 0:
            continue
        block = cusp_charpoly(d, p)
        for _ in range(abs(e)):
            if e > 0:
                numerator = numerator * block
            else:
                denominator = denominator * block
    return _poly_exact_div(numerator, denominator)
