"""Brute-force group theory backing every constant the pipeline trusts.

The compiled invariant-pair sets, the exceptional projective orders, the
trace-zero reducibility fact, and the closed-form test probabilities are all
re-derived here from first principles: explicit generator matrices closed
into finite projective groups, and a filter over the full 4x4 matrix space
mod 3 (43,046,721 candidates) for the exact statistics.

The symplectic form used for enumeration and sampling is fixed once:

    J = [[ 0, 1, 0, 0],
         [-1, 0, 0, 0],
         [ 0, 0, 0, 1],
         [ 0, 0,-1, 0]]

(two hyperbolic planes; basis vectors pair (0,1) and (2,3)).  Invariant-pair
statistics use only characteristic-polynomial data, so they do not depend on
this choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .verify import C_1920, C_720, C_7_5040

J_STANDARD = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))


class NoCommonForm(Exception):
    """The generators do not share a unique-up-to-scalar invariant skew form."""


class DegenerateForm(Exception):
    """The common skew form is singular."""


class ClosureCapExceeded(Exception):
    """Group closure grew past the safety cap; generators are wrong."""


@dataclass(frozen=True)
class SymplecticMatrix:
    """4x4 similitude mod l together with its factor: M^T J M = mult * J."""

    entries: Tuple[Tuple[int, ...], ...]
    mult: int
    ell: int


# -- exceptional generators (one conjugacy representative per group) ---------

def _sqrt_mod(target: int, ell: int) -> int:
    """Least b in [1, ell) with b^2 = target mod ell."""
    t = target % ell
    for b in range(1, ell):
        if b * b % ell == t:
            return b
    raise ValueError(f"{target} is not a square mod {ell}")


def _cube_root_unity(ell: int) -> int:
    """Least a in [1, ell) with a^2 + a + 1 = 0 mod ell."""
    for a in range(1, ell):
        if (a * a + a + 1) % ell == 0:
            return a
    raise ValueError(f"no primitive cube root of unity mod {ell}")


def exceptional_generators(variant: int, ell: int, parameter: Optional[int] = None
                           ) -> List[Tuple[Tuple[int, ...], ...]]:
    """Generator matrices mod ell for the exceptional group of the given
    projective order; the quadratic parameter defaults to the least valid
    residue but may be overridden (both roots generate conjugate groups).
    """
    if variant == 1920:
        if ell % 8 == 5:
            b = parameter if parameter is not None else _sqrt_mod(-1, ell)
            if b * b % ell != ell - 1:
                raise ValueError("parameter must square to -1")
            mats = [
                [[1, 0, 0, -1], [0, 1, -1, 0], [0, 1, 1, 0], [1, 0, 0, 1]],
                [[1, 0, 0, b], [0, 1, b, 0], [0, b, 1, 0], [b, 0, 0, 1]],
                [[1, 0, 0, -1], [0, 1, 1, 0], [0, -1, 1, 0], [1, 0, 0, 1]],
                [[1, 0, 1, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, -1, 0, 1]],
            ]
        elif ell % 8 == 3:
            b = parameter if parameter is not None else _sqrt_mod(-2, ell)
            if b * b % ell != (-2) % ell:
                raise ValueError("parameter must square to -2")
            mats = [
                [[1, 0, 0, -1], [0, 1, -1, 0], [0, 1, 1, 0], [1, 0, 0, 1]],
                [[0, 0, 0, b], [0, 0, b, 0], [0, b, 2, 0], [b, 0, 0, 2]],
                [[1, 0, 0, -1], [0, 1, 1, 0], [0, -1, 1, 0], [1, 0, 0, 1]],
                [[1, 0, 1, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, -1, 0, 1]],
            ]
        else:
            raise ValueError("projective order 1920 occurs only for l = +-3 mod 8")
    elif variant == 720:
        if ell % 12 == 7:
            a = parameter if parameter is not None else _cube_root_unity(ell)
            if (a * a + a + 1) % ell != 0:
                raise ValueError("parameter must satisfy a^2+a+1 = 0")
            mats = [
                [[a, 0, 0, 0], [0, a, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
                [[a, 0, 0, 0], [0, 1, 0, 0], [0, 0, a, 0], [0, 0, 0, 1]],
                [[a, 0, -a - 1, a + 1], [0, a, -a - 1, -a - 1],
                 [-a - 1, -a - 1, -1, 0], [a + 1, -a - 1, 0, -1]],
                [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
            ]
        elif ell % 12 == 5:
            b = parameter if parameter is not None else _sqrt_mod(-1, ell)
            if b * b % ell != ell - 1:
                raise ValueError("parameter must square to -1")
            mats = [
                [[-1, 0, 0, -1], [0, -1, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
                [[0, 0, 0, 1], [0, -1, -1, 0], [0, 1, 0, 0], [-1, 0, 0, -1]],
                [[-b - 1, b, 2 * b, -2 * b + 1], [b, b - 1, 2 * b + 1, 2 * b],
                 [b, b - 1, -b - 2, -b], [-b - 1, b, -b, b - 2]],
                [[0, -b, -2 * b, 0], [b, 0, 0, 2 * b], [-2 * b, 0, 0, -b],
                 [0, 2 * b, b, 0]],
            ]
        else:
            raise ValueError("projective order 720 occurs only for l = +-5 mod 12")
    elif variant == 5040:
        if ell != 7:
            raise ValueError("projective order 5040 occurs only at l = 7")
        mats = [
            [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1]],
            [[6, 0, 5, 2], [0, 6, 5, 5], [5, 5, 4, 0], [2, 5, 0, 4]],
            [[0, 6, 0, 0], [1, 0, 0, 0], [0, 0, 0, 6], [0, 0, 1, 0]],
            [[4, 6, 0, 0], [6, 6, 0, 0], [0, 0, 4, 1], [0, 0, 1, 6]],
        ]
    else:
        raise ValueError(f"unknown exceptional variant {variant}")
    return [tuple(tuple(c % ell for c in row) for row in m) for m in mats]


# -- small exact linear algebra mod l ----------------------------------------

def _mat_mul(A, B, ell):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(4)) % ell for j in range(4))
        for i in range(4)
    )


def _mat_transpose(A):
    return tuple(tuple(A[j][i] for j in range(4)) for i in range(4))


def _mat_inverse(A, ell):
    """Gauss-Jordan over F_ell; raises on singular input."""
    n = len(A)
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % ell), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, ell)
        aug[col] = [v * inv % ell for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(aug[r][j] - c * aug[col][j]) % ell for j in range(2 * n)]
    return tuple(tuple(row[n:]) for row in aug)


def _det4(A, ell):
    a = [list(r) for r in A]
    det = 1
    for col in range(4):
        piv = next((r for r in range(col, 4) if a[r][col] % ell), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % ell
        inv = pow(a[col][col], -1, ell)
        for r in range(col + 1, 4):
            c = a[r][col] * inv % ell
            if c:
                a[r] = [(a[r][j] - c * a[col][j]) % ell for j in range(4)]
    return det % ell


_SKEW_BASIS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _skew_from_vector(v):
    J = [[0] * 4 for _ in range(4)]
    for idx, (i, j) in enumerate(_SKEW_BASIS):
        J[i][j] = v[idx]
        J[j][i] = -v[idx]
    return tuple(tuple(r) for r in J)


def _vector_from_skew(J):
    return tuple(J[i][j] for i, j in _SKEW_BASIS)


def _conjugation_operator(G, ell):
    """6x6 matrix of J -> G^T J G on the skew basis, over F_ell."""
    Gt = _mat_transpose(G)
    cols = []
    for v in np.eye(6, dtype=int):
        J = _skew_from_vector([int(x) for x in v])
        image = _mat_mul(_mat_mul(Gt, J, ell), G, ell)
        cols.append(_vector_from_skew(image))
    return tuple(tuple(cols[j][i] % ell for j in range(6)) for i in range(6))


def _null_space(M, ell):
    """Basis (list of 6-tuples) of the kernel of the 6x6 matrix M mod ell."""
    rows = [list(r) for r in M]
    n = 6
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % ell), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, ell)
        rows[r] = [v * inv % ell for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % ell for j in range(n)]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for ri, pc in enumerate(pivots):
            vec[pc] = (-rows[ri][fc]) % ell
        basis.append(tuple(vec))
    return basis


def _intersect_spans(basis_a, basis_b, ell):
    """Basis of span(a) ∩ span(b) over F_ell, via the kernel of [A | -B]."""
    if not basis_a or not basis_b:
        return []
    na, nb = len(basis_a), len(basis_b)
    rows = []
    for coord in range(6):
        rows.append([basis_a[i][coord] % ell for i in range(na)]
                    + [(-basis_b[j][coord]) % ell for j in range(nb)])
    # kernel of the 6 x (na+nb) matrix
    n = na + nb
    pivots, r = [], 0
    work = [row[:] for row in rows]
    for c in range(n):
        piv = next((i for i in range(r, len(work)) if work[i][c] % ell), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, ell)
        work[r] = [v * inv % ell for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(work[i][j] - f * work[r][j]) % ell for j in range(n)]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        coeff = [0] * n
        coeff[fc] = 1
        for ri, pc in enumerate(pivots):
            coeff[pc] = (-work[ri][fc]) % ell
        vec = [0] * 6
        for i in range(na):
            if coeff[i]:
                for k in range(6):
                    vec[k] = (vec[k] + coeff[i] * basis_a[i][k]) % ell
        if any(vec):
            out.append(tuple(vec))
    # echelonize to get an actual basis
    return _echelon(out, ell)


def _echelon(vectors, ell):
    work = [list(v) for v in vectors]
    basis, r = [], 0
    for c in range(6):
        piv = next((i for i in range(r, len(work)) if work[i][c] % ell), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, ell)
        work[r] = [v * inv % ell for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(work[i][j] - f * work[r][j]) % ell for j in range(6)]
        r += 1
    return [tuple(v) for v in work[:r]]


def invariant_form(generators, ell: int):
    """The skew form J, unique up to scalar, with G^T J G proportional to J
    for every generator; NoCommonForm when the solution is not a single
    line, DegenerateForm when the line's form is singular.

    Branches over the per-generator proportionality scalars: for each
    generator the scalar must be an eigenvalue of the conjugation operator
    on skew forms, and the form lives in the intersection of the chosen
    eigenspaces.
    """
    gens = [tuple(tuple(c % ell for c in row) for row in G) for G in generators]
    for G in gens:
        if _det4(G, ell) == 0:
            raise ValueError("generators must be invertible")
    branches = [[tuple(int(x) for x in v) for v in np.eye(6, dtype=int)]]
    for G in gens:
        op = _conjugation_operator(G, ell)
        eig_spaces = []
        for mu in range(1, ell):
            shifted = tuple(
                tuple((op[i][j] - (mu if i == j else 0)) % ell for j in range(6))
                for i in range(6))
            ns = _null_space(shifted, ell)
            if ns:
                eig_spaces.append(ns)
        new_branches = []
        for cur in branches:
            for space in eig_spaces:
                inter = _intersect_spans(cur, space, ell)
                if inter:
                    new_branches.append(inter)
        branches = new_branches
        if not branches:
            raise NoCommonForm("no skew form is preserved up to scalar by all generators")
    lines = {tuple(b[0]) for b in branches if len(b) == 1}
    max_dim = max(len(b) for b in branches)
    if max_dim > 1 or len(lines) != 1:
        raise NoCommonForm(
            f"invariant skew forms make a solution space of dimension {max_dim} "
            f"with {len(lines) if max_dim == 1 else 'multiple'} line(s), not unique")
    J = _skew_from_vector(next(iter(lines)))
    if _det4(J, ell) == 0:
        raise DegenerateForm("common skew form is singular")
    return J


def _canonicalize(M, ell):
    """Scale so the first nonzero entry in row-major order is 1."""
    flat = [c for row in M for c in row]
    lead = next(c for c in flat if c % ell)
    inv = pow(lead, -1, ell)
    return tuple(tuple(c * inv % ell for c in row) for row in M)


def generate_projective_group(generators, ell: int, cap: int = 10 ** 6):
    """Closure of the generators in PGSp_4: breadth-first products with each
    element canonicalized modulo scalars."""
    gens = [tuple(tuple(c % ell for c in row) for row in G) for G in generators]
    for G in gens:
        if _det4(G, ell) == 0:
            raise ValueError("generators must be invertible")
    identity = tuple(tuple(1 if i == j else 0 for j in range(4)) for i in range(4))
    seen = {_canonicalize(identity, ell)}
    frontier = [identity]
    while frontier:
        nxt = []
        for M in frontier:
            for G in gens:
                P = _canonicalize(_mat_mul(M, G, ell), ell)
                if P not in seen:
                    seen.add(P)
                    nxt.append(P)
                    if len(seen) > cap:
                        raise ClosureCapExceeded(f"closure exceeded {cap} elements")
        frontier = nxt
    return seen


def _charpoly_int(M) -> Tuple[int, int, int, int]:
    """(e1, e2, e3, e4) of the integer lift, via exact Newton identities."""
    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)]

    A1 = [list(r) for r in M]
    A2 = mul(A1, A1)
    A3 = mul(A2, A1)
    A4 = mul(A3, A1)
    p = [0] + [sum(A[i][i] for i in range(4)) for A in (A1, A2, A3, A4)]
    e1 = p[1]
    e2 = (e1 * p[1] - p[2]) // 2
    e3 = (e2 * p[1] - e1 * p[2] + p[3]) // 3
    e4 = (e3 * p[1] - e2 * p[2] + e1 * p[3] - p[4]) // 4
    return e1, e2, e3, e4


def similitude(M, J, ell: int) -> int:
    """mult(M) from M^T J M = mult * J; raises if M is not a similitude."""
    S = _mat_mul(_mat_mul(_mat_transpose(M), J, ell), M, ell)
    i, j = next((i, j) for i in range(4) for j in range(4) if J[i][j] % ell)
    mu = S[i][j] * pow(J[i][j], -1, ell) % ell
    for a in range(4):
        for b in range(4):
            if S[a][b] % ell != mu * J[a][b] % ell:
                raise ValueError("matrix does not preserve the form up to scalar")
    if mu == 0:
        raise ValueError("similitude factor is zero")
    return mu


def compute_c_set(group, ell: int, J=None):
    """{(tr^2/mult, mid/mult)} over the (projective) group elements."""
    out = set()
    for M in group:
        form = J if J is not None else J_STANDARD
        mu = similitude(M, form, ell)
        e1, e2, _, _ = _charpoly_int(M)
        inv = pow(mu, -1, ell)
        out.add((e1 * e1 * inv % ell, e2 * inv % ell))
    return out


def reduced_reference_c_set(variant: int, ell: int):
    """The compiled-in invariant set, reduced mod ell."""
    ref = {1920: C_1920, 720: C_720, 5040: C_7_5040}[variant]
    return {(u % ell, v % ell) for u, v in ref}


# -- exact enumeration over F_3 ----------------------------------------------

def _quartic_tables(ell: int):
    """Per-quartic factorization facts over F_ell, indexed by the coefficient
    word c3*l^3 + c2*l^2 + c1*l + c0 of t^4 + c3 t^3 + c2 t^2 + c1 t + c0.

    Returns (irreducible, has_simple_linear, reducible) boolean arrays.
    """
    size = ell ** 4
    irreducible = np.zeros(size, dtype=bool)
    simple_linear = np.zeros(size, dtype=bool)

    monic_quadratics = [(c0, c1) for c0 in range(ell) for c1 in range(ell)]

    def roots_with_mult(coeffs):
        roots = {}
        for r in range(ell):
            work = list(coeffs)
            mult = 0
            while len(work) > 1:
                acc = 0
                quot = []
                for c in reversed(work):
                    quot.append(acc := (acc * r + c) % ell)
                if quot.pop() != 0:
                    break
                mult += 1
                work = list(reversed(quot))
            if mult:
                roots[r] = mult
        return roots

    for idx in range(size):
        c3, rem = divmod(idx, ell ** 3)
        c2, rem = divmod(rem, ell ** 2)
        c1, c0 = divmod(rem, ell)
        coeffs = (c0, c1, c2, c3, 1)
        roots = roots_with_mult(coeffs)
        if roots:
            simple_linear[idx] = any(m == 1 for m in roots.values())
            continue
        # no roots: reducible iff it splits into two monic quadratics
        split = False
        for q0, q1 in monic_quadratics:
            # try dividing exactly by t^2 + q1 t + q0
            r3 = (c3 - q1) % ell
            r2 = (c2 - q0 - q1 * r3) % ell
            rem1 = (c1 - q1 * r2 - q0 * r3) % ell
            rem0 = (c0 - q0 * r2) % ell
            if rem1 == 0 and rem0 == 0:
                split = True
                break
        irreducible[idx] = not split
    return irreducible, simple_linear, ~irreducible


@dataclass
class EnumerationReport:
    ell: int
    order: int
    alpha_count: int
    beta_count: int
    gamma_count: int
    trace_zero_count: int
    trace_zero_all_reducible: bool

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha_count, self.order)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.beta_count, self.order)

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.gamma_count, self.order)

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "order": self.order,
            "alpha_count": self.alpha_count,
            "beta_count": self.beta_count,
            "gamma_count": self.gamma_count,
            "trace_zero_count": self.trace_zero_count,
            "trace_zero_all_reducible": self.trace_zero_all_reducible,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
        }


def _gamma_pair_table(ell: int) -> np.ndarray:
    """Boolean table over pairs (u, v): True when the pair certifies escape
    from every exceptional subgroup possible at this l (the gamma condition)."""
    table = np.ones(ell * ell, dtype=bool)
    if ell % 8 not in (1, 7):
        for (u, v) in reduced_reference_c_set(1920, ell):
            table[u * ell + v] = False
    if ell % 12 not in (1, 11):
        for (u, v) in reduced_reference_c_set(720, ell):
            table[u * ell + v] = False
    if ell == 7:
        for (u, v) in reduced_reference_c_set(5040, ell):
            table[u * ell + v] = False
    return table


def _enumerate_chunk_f3(start: int, stop: int, tables) -> Tuple[int, int, int, int, int, int]:
    """Filter matrices with index in [start, stop) and classify survivors."""
    ell = 3
    irreducible, simple_linear, reducible = tables
    gamma_table = _gamma_pair_table(ell)
    J = np.array(J_STANDARD, dtype=np.int64) % ell

    idx = np.arange(start, stop, dtype=np.int64)
    powers = ell ** np.arange(16, dtype=np.int64)
    M = (idx[:, None] // powers[None, :]) % ell
    M = M.reshape(-1, 4, 4)

    JM = np.einsum("il,klm->kim", J, M) % ell
    S = np.einsum("kia,kib->kab", M, JM) % ell
    lam = S[:, 0, 1]
    target = (lam[:, None, None] * J[None, :, :]) % ell
    mask = (lam != 0) & np.all(S == target, axis=(1, 2))
    M = M[mask]
    lam = lam[mask]
    if M.shape[0] == 0:
        return (0, 0, 0, 0, 0, 0)

    M2 = np.matmul(M, M)
    M3 = np.matmul(M2, M)
    M4 = np.matmul(M3, M)
    p1 = np.trace(M, axis1=1, axis2=2)
    p2 = np.trace(M2, axis1=1, axis2=2)
    p3 = np.trace(M3, axis1=1, axis2=2)
    p4 = np.trace(M4, axis1=1, axis2=2)
    e1 = p1
    e2 = (e1 * p1 - p2) // 2
    e3 = (e2 * p1 - e1 * p2 + p3) // 3
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) // 4

    c3 = (-e1) % ell
    c2 = e2 % ell
    c1 = (-e3) % ell
    c0 = e4 % ell
    word = ((c3 * ell + c2) * ell + c1) * ell + c0

    count = int(M.shape[0])
    alpha = int(np.count_nonzero(irreducible[word]))
    tr = e1 % ell
    beta = int(np.count_nonzero((tr != 0) & simple_linear[word]))
    inv_lam = np.where(lam == 1, 1, 2)  # inverses mod 3
    u = (tr * tr % ell) * inv_lam % ell
    v = c2 * inv_lam % ell
    gamma = int(np.count_nonzero(gamma_table[u * ell + v]))
    trace_zero = tr == 0
    tz_count = int(np.count_nonzero(trace_zero))
    tz_red = int(np.count_nonzero(reducible[word[trace_zero]]))
    return (count, alpha, beta, gamma, tz_count, tz_red)


def _worker_f3(args):
    start, stop = args
    return _enumerate_chunk_f3(start, stop, _quartic_tables(3))


def enumerate_gsp4_f3(workers: int = 1, chunk: int = 3 ** 10) -> EnumerationReport:
    """Scan all 3^16 matrices mod 3, keep the symplectic similitudes, and
    count the alpha / beta / gamma conditions exactly.

    The index space is partitioned into disjoint ranges; with workers > 1
    the ranges are processed in parallel and the per-range counters merged.
    """
    total = 3 ** 16
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_worker_f3, ranges)
    else:
        tables = _quartic_tables(3)
        parts = [_enumerate_chunk_f3(s, t, tables) for s, t in ranges]
    count = sum(p[0] for p in parts)
    alpha = sum(p[1] for p in parts)
    beta = sum(p[2] for p in parts)
    gamma = sum(p[3] for p in parts)
    tz = sum(p[4] for p in parts)
    tz_red = sum(p[5] for p in parts)
    return EnumerationReport(
        ell=3,
        order=count,
        alpha_count=alpha,
        beta_count=beta,
        gamma_count=gamma,
        trace_zero_count=tz,
        trace_zero_all_reducible=(tz == tz_red),
    )


# -- uniform sampling for l in {5, 7} ----------------------------------------

def _symplectic_product(u: np.ndarray, v: np.ndarray, ell: int) -> np.ndarray:
    """<u, v> for batches of row vectors under J_STANDARD."""
    return (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
            + u[:, 2] * v[:, 3] - u[:, 3] * v[:, 2]) % ell


def _random_symplectic_batch(ell: int, n: int, rng) -> np.ndarray:
    """n uniform elements of Sp_4(F_ell) as (n, 4, 4) arrays (columns are a
    symplectic basis e1, f1, e2, f2 for J_STANDARD)."""
    def nonzero_vectors(count):
        out = np.empty((0, 4), dtype=np.int64)
        while out.shape[0] < count:
            cand = rng.integers(0, ell, size=(count, 4), dtype=np.int64)
            cand = cand[np.any(cand != 0, axis=1)]
            out = np.concatenate([out, cand])
        return out[:count]

    e1 = nonzero_vectors(n)

    inv_table = np.array([0] + [pow(i, -1, ell) for i in range(1, ell)], dtype=np.int64)

    def partner(e, inside=None):
        """Vectors f with <e, f> = 1, uniform; optionally constrained to the
        span of the `inside` basis pair (the symplectic complement)."""
        f = np.zeros((n, 4), dtype=np.int64)
        remaining = np.arange(n)
        while remaining.size:
            if inside is None:
                cand = rng.integers(0, ell, size=(remaining.size, 4), dtype=np.int64)
            else:
                a, b = inside
                s = rng.integers(0, ell, size=(remaining.size, 2), dtype=np.int64)
                cand = (s[:, :1] * a[remaining] + s[:, 1:2] * b[remaining]) % ell
            prod = _symplectic_product(e[remaining], cand, ell)
            ok = prod != 0
            idx = remaining[ok]
            f[idx] = cand[ok] * inv_table[prod[ok]][:, None] % ell
            remaining = remaining[~ok]
        return f

    f1 = partner(e1)

    # symplectic complement of <e1, f1>: project two random vectors
    def project(u, e, f):
        ue = _symplectic_product(e, u, ell)   # <e, u>
        uf = _symplectic_product(f, u, ell)   # <f, u>
        return (u + uf[:, None] * e - ue[:, None] * f) % ell

    def complement_basis():
        a = np.zeros((n, 4), dtype=np.int64)
        b = np.zeros((n, 4), dtype=np.int64)
        remaining = np.arange(n)
        while remaining.size:
            u = rng.integers(0, ell, size=(remaining.size, 4), dtype=np.int64)
            v = rng.integers(0, ell, size=(remaining.size, 4), dtype=np.int64)
            pu = project(u, e1[remaining], f1[remaining])
            pv = project(v, e1[remaining], f1[remaining])
            # need pu, pv to span the 2-dim complement: <pu, pv> != 0 suffices
            ok = _symplectic_product(pu, pv, ell) != 0
            idx = remaining[ok]
            a[idx] = pu[ok]
            b[idx] = pv[ok]
            remaining = remaining[~ok]
        return a, b

    wa, wb = complement_basis()
    # e2 uniform nonzero in the complement
    e2 = np.zeros((n, 4), dtype=np.int64)
    remaining = np.arange(n)
    while remaining.size:
        s = rng.integers(0, ell, size=(remaining.size, 2), dtype=np.int64)
        cand = (s[:, :1] * wa[remaining] + s[:, 1:2] * wb[remaining]) % ell
        ok = np.any(cand != 0, axis=1)
        idx = remaining[ok]
        e2[idx] = cand[ok]
        remaining = remaining[~ok]
    f2 = partner(e2, inside=(wa, wb))

    out = np.stack([e1, f1, e2, f2], axis=2)  # columns
    return out


def random_gsp4(ell: int, seed: int) -> SymplecticMatrix:
    """One uniform element of GSp_4(F_ell): a uniform symplectic basis gives
    a uniform Sp element (simple transitivity), then a uniform similitude
    scaling spreads over the cosets."""
    if ell % 2 == 0:
        raise ValueError("l must be odd")
    rng = np.random.default_rng(seed)
    M = _random_symplectic_batch(ell, 1, rng)[0]
    c = int(rng.integers(1, ell))
    M = M.copy()
    M[:, 1] = M[:, 1] * c % ell
    M[:, 3] = M[:, 3] * c % ell
    entries = tuple(tuple(int(x) for x in row) for row in M)
    return SymplecticMatrix(entries=entries, mult=c, ell=ell)


@dataclass
class SampleReport:
    ell: int
    samples: int
    seed: int
    alpha_hat: float
    beta_hat: float
    alpha_expected: Fraction
    beta_expected: Fraction

    def z_scores(self) -> Tuple[float, float]:
        import math

        za = (self.alpha_hat - float(self.alpha_expected)) / math.sqrt(
            float(self.alpha_expected) * (1 - float(self.alpha_expected)) / self.samples)
        zb = (self.beta_hat - float(self.beta_expected)) / math.sqrt(
            float(self.beta_expected) * (1 - float(self.beta_expected)) / self.samples)
        return za, zb

    def as_dict(self) -> dict:
        za, zb = self.z_scores()
        return {
            "ell": self.ell,
            "samples": self.samples,
            "seed": self.seed,
            "alpha_hat": self.alpha_hat,
            "beta_hat": self.beta_hat,
            "alpha_expected": str(self.alpha_expected),
            "beta_expected": str(self.beta_expected),
            "alpha_z": za,
            "beta_z": zb,
        }


def sample_statistics(ell: int, n: int, seed: int, batch: int = 50000) -> SampleReport:
    """Empirical alpha/beta proportions over n uniform GSp_4(F_ell) samples."""
    if ell % 2 == 0:
        raise ValueError("l must be odd")
    rng = np.random.default_rng(seed)
    irreducible, simple_linear, _ = _quartic_tables(ell)
    alpha = beta = 0
    left = n
    while left:
        k = min(batch, left)
        M = _random_symplectic_batch(ell, k, rng)
        c = rng.integers(1, ell, size=k, dtype=np.int64)
        M[:, :, 1] = M[:, :, 1] * c[:, None] % ell
        M[:, :, 3] = M[:, :, 3] * c[:, None] % ell
        M2 = np.matmul(M, M)
        M3 = np.matmul(M2, M)
        M4 = np.matmul(M3, M)
        p1 = np.trace(M, axis1=1, axis2=2)
        p2 = np.trace(M2, axis1=1, axis2=2)
        p3 = np.trace(M3, axis1=1, axis2=2)
        p4 = np.trace(M4, axis1=1, axis2=2)
        e1 = p1
        e2 = (e1 * p1 - p2) // 2
        e3 = (e2 * p1 - e1 * p2 + p3) // 3
        e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) // 4
        c3 = (-e1) % ell
        c2 = e2 % ell
        c1 = (-e3) % ell
        c0 = e4 % ell
        word = ((c3 * ell + c2) * ell + c1) * ell + c0
        alpha += int(np.count_nonzero(irreducible[word]))
        tr = e1 % ell
        beta += int(np.count_nonzero((tr != 0) & simple_linear[word]))
        left -= k
    return SampleReport(
        ell=ell, samples=n, seed=seed,
        alpha_hat=alpha / n, beta_hat=beta / n,
        alpha_expected=alpha_probability(ell),
        beta_expected=beta_probability(ell),
    )


# -- exact enumeration at l = 5 (opt-in; order 37,440,000) --------------------

def _complement_basis_exact(e1, f1, ell):
    """Two vectors spanning {v : <e1,v> = <f1,v> = 0} for J_STANDARD."""
    J = np.array(J_STANDARD, dtype=np.int64)
    rows = np.stack([e1 @ J % ell, f1 @ J % ell])
    # kernel of the 2x4 system by hand
    rows = [list(map(int, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(4):
        piv = next((i for i in range(r, 2) if rows[i][c] % ell), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, ell)
        rows[r] = [v * inv % ell for v in rows[r]]
        for i in range(2):
            if i != r and rows[i][c]:
                fct = rows[i][c]
                rows[i] = [(rows[i][j] - fct * rows[r][j]) % ell for j in range(4)]
        pivots.append(c)
        r += 1
        if r == 2:
            break
    free = [c for c in range(4) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * 4
        vec[fc] = 1
        for ri, pc in enumerate(pivots):
            vec[pc] = (-rows[ri][fc]) % ell
        basis.append(np.array(vec, dtype=np.int64))
    return basis


def enumerate_gsp4_f5(progress=None) -> EnumerationReport:
    """Exhaustive statistics at l = 5 by running over all symplectic bases.

    For each nonzero e1 and each f1 with <e1, f1> = 1, all 120 completions
    (e2, f2) inside the symplectic complement are enumerated, then all 4
    similitude scalings; this covers GSp_4(F_5) exactly once
    (624 * 125 * 120 * 4 = 37,440,000).
    """
    ell = 5
    irreducible, simple_linear, reducible = _quartic_tables(ell)
    gamma_table = _gamma_pair_table(ell)
    inv_table = np.array([0] + [pow(i, -1, ell) for i in range(1, ell)], dtype=np.int64)

    vectors = np.array(list(itertools.product(range(ell), repeat=4)), dtype=np.int64)
    nonzero = vectors[np.any(vectors != 0, axis=1)]
    pair_grid = np.array(list(itertools.product(range(ell), repeat=2)), dtype=np.int64)
    scalars = np.arange(1, ell, dtype=np.int64)

    def sprod(u, v):
        return (u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
                + u[..., 2] * v[..., 3] - u[..., 3] * v[..., 2]) % ell

    count = alpha = beta = gamma = tz = tz_red = 0
    for i1, e1 in enumerate(nonzero):
        if progress and i1 % 50 == 0:
            progress(i1, len(nonzero))
        f1s = vectors[sprod(np.broadcast_to(e1, vectors.shape), vectors) == 1]
        for f1 in f1s:
            wa, wb = _complement_basis_exact(e1, f1, ell)
            W = (pair_grid[:, :1] * wa + pair_grid[:, 1:2] * wb) % ell  # (25, 4)
            prod = (np.einsum("ik,jk->ij", W @ np.array(J_STANDARD, dtype=np.int64), W)) % ell
            nz = np.any(W != 0, axis=1)
            ii, jj = np.nonzero((prod == 1) & nz[:, None])
            e2 = W[ii]
            f2 = W[jj]
            m = e2.shape[0]
            M = np.empty((m, 4, 4), dtype=np.int64)
            M[:, :, 0] = e1
            M[:, :, 1] = f1
            M[:, :, 2] = e2
            M[:, :, 3] = f2
            Ms = np.repeat(M, len(scalars), axis=0)
            cc = np.tile(scalars, m)
            Ms[:, :, 1] = Ms[:, :, 1] * cc[:, None] % ell
            Ms[:, :, 3] = Ms[:, :, 3] * cc[:, None] % ell
            M2 = np.matmul(Ms, Ms)
            M3 = np.matmul(M2, Ms)
            M4 = np.matmul(M3, Ms)
            p1 = np.trace(Ms, axis1=1, axis2=2)
            p2 = np.trace(M2, axis1=1, axis2=2)
            p3 = np.trace(M3, axis1=1, axis2=2)
            p4 = np.trace(M4, axis1=1, axis2=2)
            en1 = p1
            en2 = (en1 * p1 - p2) // 2
            en3 = (en2 * p1 - en1 * p2 + p3) // 3
            en4 = (en3 * p1 - en2 * p2 + en1 * p3 - p4) // 4
            c3 = (-en1) % ell
            c2 = en2 % ell
            c1 = (-en3) % ell
            c0 = en4 % ell
            word = ((c3 * ell + c2) * ell + c1) * ell + c0
            count += Ms.shape[0]
            alpha += int(np.count_nonzero(irreducible[word]))
            tr = en1 % ell
            beta += int(np.count_nonzero((tr != 0) & simple_linear[word]))
            inv_lam = inv_table[cc % ell]
            u = (tr * tr % ell) * inv_lam % ell
            v = c2 * inv_lam % ell
            gamma += int(np.count_nonzero(gamma_table[u * ell + v]))
            tzm = tr == 0
            tz += int(np.count_nonzero(tzm))
            tz_red += int(np.count_nonzero(reducible[word[tzm]]))
    return EnumerationReport(
        ell=ell, order=count, alpha_count=alpha, beta_count=beta,
        gamma_count=gamma, trace_zero_count=tz,
        trace_zero_all_reducible=(tz == tz_red),
    )


# -- closed-form probabilities ------------------------------------------------

def alpha_probability(ell: int) -> Fraction:
    """Chance of an irreducible characteristic polynomial."""
    return Fraction(1, 4) - Fraction(1, 2 * (ell * ell + 1))


def beta_probability(ell: int) -> Fraction:
    """Chance of nonzero trace plus a multiplicity-one linear factor."""
    return (Fraction(3, 8) - Fraction(3, 4 * (ell - 1))
            + Fraction(1, 2 * (ell - 1) ** 2))


def failure_probability_bound(n: int, ell: int) -> Fraction:
    """(1-alpha)^n + (1-beta)^n + (9/10)^n: the chance that n independent
    uniform samples all miss each of the three test conditions, with the
    gamma term replaced by its universal 9/10 bound."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = 1 - alpha_probability(ell)
    b = 1 - beta_probability(ell)
    return a ** n + b ** n + Fraction(9, 10) ** n
