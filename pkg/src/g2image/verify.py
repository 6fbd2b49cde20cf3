"""Pruning the superset with Frobenius witnesses.

For each surviving candidate l, five tests must each succeed at some good
prime p < B: three exceptional-subgroup exclusions driven by the compiled-in
invariant pair sets, plus irreducibility and simple-linear-factor tests on
the reduced quartic.  l = 2 is decided separately by certifying that the
splitting field of 4f + h^2 has Galois group of order 720: a 6-cycle, a
5-cycle and a transposition seen as factorization patterns at unramified
primes force the full symmetric group on six letters (Dedekind plus Jordan),
so the certificate errs only toward keeping 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .arith import IntPoly, factor_multiplicities, primes_below, radical
from .frobenius import CurveModel, FrobeniusPoly, frobenius_poly, is_good_prime
from .sieve import SieveReport

# Invariant pairs (trace^2/mult, mid/mult) of the three exceptional maximal
# projective subgroups; membership of the Frobenius pair mod l certifies
# nothing, non-membership rules the subgroup out.  Verified independently by
# the oracle module's group enumeration.
C_1920 = (
    (0, -2), (0, -1), (0, 0), (0, 1), (0, 2), (1, 1),
    (2, 1), (2, 2), (4, 2), (4, 3), (8, 4), (16, 6),
)
C_720 = (
    (0, 1), (0, 0), (4, 3), (1, 1), (16, 6), (0, 2), (1, 0), (3, 2), (0, -2),
)
C_7_5040 = (
    (0, 0), (0, 1), (0, 2), (0, 5), (0, 6), (1, 0),
    (1, 1), (2, 6), (3, 2), (4, 3), (5, 3), (6, 3),
)

# largest l at which an exceptional subgroup can be the full mod-l image;
# beyond it the projective exponent is too small (optional shortcut)
EXCEPTIONAL_L_MAX = 1441

TEST_FLAGS = ("exc_1920", "exc_720", "exc_5040", "nonexc_irreducible", "nonexc_linear")


def charpoly_mod(F: FrobeniusPoly, ell: int) -> Tuple[int, int, int, int, int]:
    """Coefficients of P_p(t) mod ell, ascending; rejects ell = p."""
    if ell == F.p:
        raise ValueError("reduction prime must differ from p")
    p, a, b = F.p, F.a, F.b
    return (p * p % ell, -p * a % ell, b % ell, -a % ell, 1)


def _reduced_pairs(pairs, ell: int) -> set:
    return {(u % ell, v % ell) for u, v in pairs}


def invariant_pair(F: FrobeniusPoly, ell: int) -> Tuple[int, int]:
    """(a_p^2/p, b_p/p) mod ell; needs ell != p and ell != 2 handled upstream."""
    pinv = pow(F.p % ell, -1, ell)
    return (F.a * F.a * pinv % ell, F.b * pinv % ell)


def test_exceptional(F: FrobeniusPoly, ell: int, variant: int) -> bool:
    """Exceptional-subgroup exclusion test for variant in {1920, 720, 5040}.

    Passes on the congruence fast path (the subgroup does not occur at this
    l at all) or when the invariant pair escapes the compiled set mod l.
    """
    if ell == 2:
        raise ValueError("exceptional tests are defined for odd l only")
    if F.p % ell == 0:
        raise ValueError("test needs l distinct from p")
    if variant == 1920:
        if ell % 8 in (1, 7):
            return True
        return invariant_pair(F, ell) not in _reduced_pairs(C_1920, ell)
    if variant == 720:
        if ell % 12 in (1, 11):
            return True
        return invariant_pair(F, ell) not in _reduced_pairs(C_720, ell)
    if variant == 5040:
        if ell != 7:
            return True
        return invariant_pair(F, ell) not in _reduced_pairs(C_7_5040, ell)
    raise ValueError(f"unknown variant {variant}")


# -- quartic factorization over F_ell, by exhaustive search ------------------


def _quartic_roots(coeffs, ell: int) -> Dict[int, int]:
    """{root: multiplicity} of a monic quartic over F_ell by root scanning."""
    roots: Dict[int, int] = {}
    for r in range(ell):
        v = 0
        for c in reversed(coeffs):
            v = (v * r + c) % ell
        if v == 0:
            # multiplicity by repeated synthetic division
            work = list(coeffs)
            mult = 0
            while len(work) > 1:
                quot = []
                acc = 0
                for c in reversed(work):
                    acc = (acc * r + c) % ell
                    quot.append(acc)
                rem = quot.pop()
                if rem != 0:
                    break
                mult += 1
                work = list(reversed(quot))
            roots[r] = mult
    return roots


def _splits_into_quadratics(coeffs, ell: int) -> bool:
    """Does the monic quartic factor as two monic quadratics over F_ell?

    Exhausts constant-term pairs multiplying to the quartic's constant term;
    l stays small enough that this beats a general factorization algorithm
    on auditability.
    """
    c0, c1, c2, c3 = (coeffs[0] % ell, coeffs[1] % ell, coeffs[2] % ell, coeffs[3] % ell)
    for beta in range(ell):
        for delta in range(ell):
            if beta * delta % ell != c0:
                continue
            # (t^2 + alpha t + beta)(t^2 + gamma t + delta):
            #   alpha + gamma = c3, beta + delta + alpha gamma = c2,
            #   alpha delta + beta gamma = c1
            diff = (delta - beta) % ell
            if diff != 0:
                alpha = (c1 - beta * c3) * pow(diff, -1, ell) % ell
                gamma = (c3 - alpha) % ell
                if (beta + delta + alpha * gamma) % ell == c2:
                    return True
            else:
                if (c1 - beta * c3) % ell != 0:
                    continue
                # alpha + gamma = c3, alpha gamma = c2 - 2 beta: discriminant test
                disc = (c3 * c3 - 4 * (c2 - 2 * beta)) % ell
                if pow(disc, (ell - 1) // 2, ell) != ell - 1:
                    return True
    return False


def test_irreducible(F: FrobeniusPoly, ell: int) -> bool:
    """Does P_p(t) stay irreducible mod l?  No roots and no quadratic split."""
    if ell == 2:
        raise ValueError("test defined for odd l")
    coeffs = charpoly_mod(F, ell)
    if _quartic_roots(coeffs, ell):
        return False
    return not _splits_into_quadratics(coeffs, ell)


def test_linear(F: FrobeniusPoly, ell: int) -> bool:
    """Nonzero trace and a linear factor of multiplicity exactly one mod l."""
    if ell == 2:
        raise ValueError("test defined for odd l")
    if F.a % ell == 0:
        return False
    coeffs = charpoly_mod(F, ell)
    return any(m == 1 for m in _quartic_roots(coeffs, ell).values())


# -- l = 2: symmetric-group certificate for the sextic ----------------------


def _pattern_mod_p(g: IntPoly, p: int) -> List[int]:
    """Factorization degree pattern of squarefree g mod p (distinct-degree)."""
    f = [c % p for c in g.coeffs]
    while f and f[-1] == 0:
        f.pop()
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, xi in enumerate(a):
            if xi:
                for j, yj in enumerate(b):
                    out[i + j] = (out[i + j] + xi * yj) % p
        while out and out[-1] == 0:
            out.pop()
        return out

    def pmod(a, m):
        a = a[:]
        dm = len(m) - 1
        minv = pow(m[-1], -1, p)
        while len(a) - 1 >= dm:
            while a and a[-1] == 0:
                a.pop()
            if len(a) - 1 < dm:
                break
            c = a[-1] * minv % p
            k = len(a) - 1 - dm
            for i in range(dm + 1):
                a[k + i] = (a[k + i] - c * m[i]) % p
        while a and a[-1] == 0:
            a.pop()
        return a

    def pgcd(a, b):
        while b:
            a, b = b, pmod(a, b)
        if a:
            inv_ = pow(a[-1], -1, p)
            a = [c * inv_ % p for c in a]
        return a

    pattern = []
    work = f[:]
    h = [0, 1]
    d = 0
    while len(work) - 1 > 0:
        d += 1
        if len(work) - 1 < 2 * d:
            pattern.append(len(work) - 1)
            break
        # h = x^(p^d) mod work
        e = p
        hp = h
        # raise current h to the p-th power mod work via square and multiply on x
        acc = [1]
        base = hp
        while e:
            if e & 1:
                acc = pmod(pmul(acc, base), work)
            base = pmod(pmul(base, base), work)
            e >>= 1
        h = acc
        diff = h[:]
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        common = pgcd(work, diff)
        if len(common) > 1:
            deg = len(common) - 1
            pattern.extend([d] * (deg // d))
            quot = work
            # exact division
            q = []
            rem = quot[:]
            dm = len(common) - 1
            for k in range(len(rem) - 1 - dm, -1, -1):
                c = rem[dm + k]
                q.append(c)
                for i in range(dm + 1):
                    rem[k + i] = (rem[k + i] - c * common[i]) % p
            work = list(reversed(q))
            while work and work[-1] == 0:
                work.pop()
            h = pmod(h, work) if len(work) > 1 else h
    return sorted(pattern)


@dataclass
class GaloisCertificate:
    six_cycle_prime: Optional[int] = None
    five_cycle_prime: Optional[int] = None
    transposition_prime: Optional[int] = None

    @property
    def complete(self) -> bool:
        return None not in (self.six_cycle_prime, self.five_cycle_prime,
                            self.transposition_prime)


def is_galois_s6(g: IntPoly, effort_bound: int = 1000):
    """('yes', certificate) when the splitting field of the sextic g has
    Galois group S6 (order 720); otherwise ('inconclusive', note).

    Witness patterns at primes unramified in g (p not dividing lc * disc):
    (6) gives transitivity, (1,5) upgrades it to 2-transitive hence
    primitive, (1,1,1,1,2) is a transposition; a primitive group with a
    transposition is the full symmetric group.  Degree-5 inputs return
    inconclusive: the order-720 criterion as stated needs six finite roots.
    """
    if g.degree == 5:
        return "inconclusive", "degree-5 model (rational Weierstrass point); criterion not applicable"
    if g.degree != 6:
        raise ValueError("expected a degree 5 or 6 polynomial")
    disc = g.discriminant()
    if disc == 0:
        raise ValueError("polynomial must be squarefree")
    root = _rational_root(g)
    if root is not None:
        return "inconclusive", f"rational root {root[0]}/{root[1]}: intransitive, not S6"
    cert = GaloisCertificate()
    for p in primes_below(effort_bound):
        if p == 2 or disc % p == 0 or g.lc % p == 0:
            continue
        pattern = _pattern_mod_p(g, p)
        if pattern == [6] and cert.six_cycle_prime is None:
            cert.six_cycle_prime = p
        elif pattern == [1, 5] and cert.five_cycle_prime is None:
            cert.five_cycle_prime = p
        elif pattern == [1, 1, 1, 1, 2] and cert.transposition_prime is None:
            cert.transposition_prime = p
        if cert.complete:
            return "yes", cert
    return "inconclusive", f"no full cycle-type certificate below {effort_bound}"


def _rational_root(g: IntPoly):
    """A rational root (num, den) of g, or None; exact integer arithmetic.

    Candidates have num | constant term and den | leading coefficient; the
    homogeneous evaluation sum c_i num^i den^(deg - i) decides membership.
    """
    c0 = g[0]
    if c0 == 0:
        return (0, 1)
    deg = g.degree

    def ipdivisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    for den in ipdivisors(g.lc):
        for mag in ipdivisors(c0):
            for num in (mag, -mag):
                if math.gcd(num, den) != 1:
                    continue
                if sum(g[i] * num ** i * den ** (deg - i) for i in range(deg + 1)) == 0:
                    return (num, den)
    return None


# -- the verification scan ---------------------------------------------------


@dataclass
class TestState:
    """Per-candidate progress: five flags with their first witnesses.

    Auto-passed flags record the congruence reason instead of a prime.
    """

    ell: int
    flags: Dict[str, bool] = field(default_factory=lambda: {f: False for f in TEST_FLAGS})
    witnesses: Dict[str, object] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(self.flags.values())

    def mark(self, flag: str, witness) -> None:
        if not self.flags[flag]:
            self.flags[flag] = True
            self.witnesses[flag] = witness


@dataclass
class VerifyReport:
    likely_nonsurjective: Tuple[int, ...]
    states: Dict[int, TestState]
    bound: int
    largest_witness: Optional[int]
    two_removed_by: Optional[object] = None  # GaloisCertificate when 2 was removed

    def as_dict(self, include_witnesses: bool = False) -> dict:
        out = {
            "likely_nonsurjective": list(self.likely_nonsurjective),
            "bound": self.bound,
            "largest_witness": self.largest_witness,
        }
        if include_witnesses:
            out["witnesses"] = {
                str(ell): {flag: state.witnesses.get(flag) for flag in TEST_FLAGS
                           if state.flags[flag]}
                for ell, state in sorted(self.states.items())
            }
            if self.two_removed_by is not None:
                cert = self.two_removed_by
                out["witnesses"]["2"] = {
                    "six_cycle": cert.six_cycle_prime,
                    "five_cycle": cert.five_cycle_prime,
                    "transposition": cert.transposition_prime,
                }
        return out


def _auto_pass(state: TestState, shortcut_1441: bool) -> None:
    ell = state.ell
    if ell % 8 in (1, 7):
        state.mark("exc_1920", f"auto: l = {ell} is +-1 mod 8")
    if ell % 12 in (1, 11):
        state.mark("exc_720", f"auto: l = {ell} is +-1 mod 12")
    if ell != 7:
        state.mark("exc_5040", f"auto: l = {ell} differs from 7")
    if shortcut_1441 and ell > EXCEPTIONAL_L_MAX:
        reason = f"auto: exceptional images cannot occur for l > {EXCEPTIONAL_L_MAX}"
        for flag in ("exc_1920", "exc_720", "exc_5040"):
            state.mark(flag, reason)


def likely_nonsurjective(curve: CurveModel, sieve_report: SieveReport, bound: int,
                         shortcut_1441: bool = False,
                         galois_effort: int = 1000) -> VerifyReport:
    """Scan good primes p < bound and drop every candidate that passes all
    five tests; 2 is dropped only on a full symmetric-group certificate.

    The scan is sequential in p so recorded witnesses are the minimal ones;
    witnesses are replayable through the individual test functions.
    """
    if bound < 3:
        raise ValueError("bound must be >= 3")
    candidates = list(sieve_report.possibly_nonsurjective)
    states = {ell: TestState(ell=ell) for ell in candidates if ell != 2}
    for state in states.values():
        _auto_pass(state, shortcut_1441)

    two_removed_by = None
    remaining = set(candidates)
    if 2 in remaining:
        verdict, detail = is_galois_s6(curve.g, galois_effort)
        if verdict == "yes":
            remaining.discard(2)
            two_removed_by = detail

    largest_witness = None
    for p in primes_below(bound):
        if not any(ell != 2 for ell in remaining):
            break
        if not is_good_prime(curve, p):
            continue
        F = frobenius_poly(curve, p)
        for ell in sorted(ell for ell in remaining if ell != 2):
            if ell == p:
                continue
            state = states[ell]
            if not state.flags["exc_1920"] and test_exceptional(F, ell, 1920):
                state.mark("exc_1920", p)
            if not state.flags["exc_720"] and test_exceptional(F, ell, 720):
                state.mark("exc_720", p)
            if not state.flags["exc_5040"] and test_exceptional(F, ell, 5040):
                state.mark("exc_5040", p)
            if not state.flags["nonexc_irreducible"] and test_irreducible(F, ell):
                state.mark("nonexc_irreducible", p)
            if not state.flags["nonexc_linear"] and test_linear(F, ell):
                state.mark("nonexc_linear", p)
            if state.all_passed:
                remaining.discard(ell)
                for w in state.witnesses.values():
                    if isinstance(w, int):
                        largest_witness = max(largest_witness or 0, w)

    return VerifyReport(
        likely_nonsurjective=tuple(sorted(remaining)),
        states=states,
        bound=bound,
        largest_witness=largest_witness,
        two_removed_by=two_removed_by,
    )


def grh_bound(q: int, N: int) -> int:
    """Witness bound sufficient under GRH for largest nonsurjective prime q
    and conductor N: the ceiling of

        (4[(2q^11 - 1) log rad(2qN) + 22 q^11 log(2q)] + 5 q^11 + 5)^2

    with natural logarithms and the radical computed exactly.
    """
    q11 = q ** 11
    r = radical(2 * q * N)
    inner = 4 * ((2 * q11 - 1) * math.log(r) + 22 * q11 * math.log(2 * q)) + 5 * q11 + 5
    return math.ceil(inner * inner)
