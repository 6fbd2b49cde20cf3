"""The provable superset: every prime where the mod-l image can fail to
surject lands in the output.

Four constraint streams feed greatest common divisors as auxiliary good
primes are consumed: an odd-dimensional-subquotient stream, a related
two-dimensional-subquotient stream, one self-dual stream per divisor level
of the conductor below its square root, and one stream per nontrivial
quadratic character of the conductor's modulus.  Signs never matter (gcds of
absolute values), zero terms are gcd-neutral, and a stream that stays at
zero through the whole auxiliary pool is the signature of extra geometric
endomorphisms, reported loudly instead of silently producing an empty gcd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .arith import (
    IntPoly,
    factor_multiplicities,
    is_smooth,
    multiplicative_order,
    power_roots,
    resultant,
    square_part,
)
from .frobenius import CurveModel, FrobeniusPoly, frobenius_poly, good_primes
from .hecke_data import HeckeTable, required_levels

ALWAYS_INCLUDED = (2, 3, 5, 7)


class EndomorphismSuspected(Exception):
    """A sieve gcd stayed at zero through the auxiliary pool.

    For typical Jacobians the relevant quantity is nonzero at some auxiliary
    prime; persistent vanishing is how extra geometric endomorphisms announce
    themselves, so the curve is presumed atypical and the run aborts.
    """

    def __init__(self, algorithm: str, detail: str = "", site: Optional[str] = None):
        self.algorithm = algorithm
        self.detail = detail
        self.site = site  # level for alg_selfdual, character label for alg_quad
        super().__init__(f"{algorithm}: {detail}" if detail else algorithm)


class UnconstrainedCharacter(Exception):
    """No auxiliary prime with phi(p) = -1 exists below the bound.

    An empty gcd is undefined, not zero; the character then constrains
    nothing and the superset cannot be certified, so the run aborts.
    """

    def __init__(self, character: "QuadraticCharacter"):
        self.character = character
        super().__init__(f"no auxiliary prime is inert for {character.label}")


@dataclass(frozen=True)
class QuadraticCharacter:
    """Quadratic Dirichlet character mod N as a product of local symbols.

    Components: the Legendre symbol at each chosen odd prime divisor of N,
    and optionally the two 2-adic characters chi4 = (-1/.) (conductor 4) and
    chi8 = (2/.) (conductor 8).  Evaluation is totally multiplicative with
    values in {+1, -1} on integers coprime to the modulus.
    """

    modulus: int
    legendre_primes: Tuple[int, ...] = ()
    chi4: bool = False
    chi8: bool = False

    @property
    def label(self) -> str:
        parts = []
        if self.chi4:
            parts.append("chi4")
        if self.chi8:
            parts.append("chi8")
        parts.extend(f"leg{q}" for q in self.legendre_primes)
        return "*".join(parts) if parts else "trivial"

    @property
    def is_trivial(self) -> bool:
        return not (self.legendre_primes or self.chi4 or self.chi8)

    def __call__(self, n: int) -> int:
        if math.gcd(n, self.modulus) != 1:
            raise ValueError(f"{n} is not coprime to the modulus {self.modulus}")
        if n % 2 == 0 and (self.chi4 or self.chi8):
            raise ValueError("2-adic components need odd arguments")
        value = 1
        if self.chi4 and n % 4 == 3:
            value = -value
        if self.chi8 and n % 8 in (3, 5):
            value = -value
        for q in self.legendre_primes:
            if pow(n % q, (q - 1) // 2, q) == q - 1:
                value = -value
        return value


def character_space_dimension(N: int) -> int:
    """d(N): F_2-dimension of the quadratic characters of modulus N."""
    mult = factor_multiplicities(N)
    omega = len(mult)
    v2 = mult.get(2, 0)
    if v2 == 0:
        return omega
    if v2 == 1:
        return omega - 1
    if v2 == 2:
        return omega
    return omega + 1


def quadratic_characters(N: int) -> List[QuadraticCharacter]:
    """All 2^d(N) - 1 nontrivial quadratic characters of modulus N.

    The trivial character is omitted: it never takes the value -1, so it can
    never constrain anything.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    mult = factor_multiplicities(N)
    odd_primes = sorted(q for q in mult if q != 2)
    v2 = mult.get(2, 0)
    generators: List[QuadraticCharacter] = []
    if v2 >= 2:
        generators.append(QuadraticCharacter(N, chi4=True))
    if v2 >= 3:
        generators.append(QuadraticCharacter(N, chi8=True))
    for q in odd_primes:
        generators.append(QuadraticCharacter(N, legendre_primes=(q,)))
    assert len(generators) == character_space_dimension(N)
    out = []
    for mask in range(1, 1 << len(generators)):
        chi4 = chi8 = False
        legs: List[int] = []
        for i, gen in enumerate(generators):
            if mask >> i & 1:
                chi4 = chi4 or gen.chi4
                chi8 = chi8 or gen.chi8
                legs.extend(gen.legendre_primes)
        out.append(QuadraticCharacter(N, legendre_primes=tuple(sorted(legs)),
                                      chi4=chi4, chi8=chi8))
    return out


# -- the four constraint streams --------------------------------------------


def related_quartic(F: FrobeniusPoly) -> IntPoly:
    """Quartic whose roots are the products of root pairs of P_p not
    multiplying to p; its roots multiply in pairs to p^2."""
    p, a, b = F.p, F.a, F.b
    return IntPoly([p ** 4, -p * p * (b - 2 * p), p * (a * a - 2 * b + 2 * p), -(b - 2 * p), 1])


def hecke_q_poly(H: IntPoly, p: int) -> IntPoly:
    """Hecke L-polynomial Q_d(t) from the T_p characteristic polynomial H(z).

    Homogenize H with an auxiliary variable t and substitute z = p + t^2:
    each eigenvalue factor (z - a) becomes t^2 - a t + p.
    """
    m = H.degree
    if m < 0:
        raise ValueError("zero polynomial")
    base = IntPoly([p, 0, 1])  # p + t^2
    out = IntPoly([])
    for k in range(m + 1):
        if H[k]:
            out = out + H[k] * (base ** k).shift(m - k)
    return out


def _exponent(curve: CurveModel, p: int) -> int:
    """f' = gcd(f, 120) where f is the order of p modulo N_sq."""
    nsq = square_part(curve.conductor)
    return math.gcd(multiplicative_order(p, nsq), 120)


def odd_subquotient_term(curve: CurveModel, F: FrobeniusPoly) -> int:
    """p * P_p^(f')(1), the gcd term of the odd-subquotient stream."""
    fp = _exponent(curve, F.p)
    return F.p * power_roots(F.poly(), fp)(1)


def related_term(curve: CurveModel, F: FrobeniusPoly) -> int:
    """p * Q_p^(f')(1) * Q_p^(f')(p^f'), for the related-subquotient stream."""
    fp = _exponent(curve, F.p)
    q = power_roots(related_quartic(F), fp)
    return F.p * q(1) * q(F.p ** fp)


def selfdual_term(F: FrobeniusPoly, hecke_poly: IntPoly) -> int:
    """p * Res(P_p, Q_d) for one divisor level."""
    q = hecke_q_poly(hecke_poly, F.p)
    return F.p * resultant(F.poly(), q)


class _GcdStream:
    """gcd accumulator with the stability early-exit policy.

    Exits once the value is unchanged across `window` consecutive
    accumulation events, is nonzero, and is smooth_bound-smooth; a stream
    that never reaches that state simply consumes the whole pool.
    """

    def __init__(self, window: int, smooth_bound: int):
        self.value = 0
        self.window = window
        self.smooth_bound = smooth_bound
        self._stable = 0
        self.events = 0

    def feed(self, term: int) -> None:
        new = math.gcd(self.value, abs(term))
        self._stable = self._stable + 1 if new == self.value else 0
        self.value = new
        self.events += 1

    @property
    def done(self) -> bool:
        return (
            self._stable >= self.window
            and self.value != 0
            and is_smooth(self.value, self.smooth_bound)
        )


@dataclass
class SieveConfig:
    aux_bound: int = 1000
    hecke: Optional[HeckeTable] = None
    stability_window: int = 5
    smooth_bound: int = 7
    early_exit: bool = True


@dataclass
class SieveReport:
    """Provable superset with per-prime provenance and the raw gcd integers."""

    possibly_nonsurjective: Tuple[int, ...]
    provenance: Dict[int, Tuple[str, ...]]
    m_odd: int
    m_related: int
    m_selfdual: Dict[int, int]
    m_quad: Dict[str, int]
    auxiliary_primes_used: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "possibly_nonsurjective": list(self.possibly_nonsurjective),
            "provenance": {str(p): sorted(reasons) for p, reasons in self.provenance.items()},
            "raw": {
                "m_odd": self.m_odd,
                "m_related": self.m_related,
                "m_selfdual": {str(d): v for d, v in sorted(self.m_selfdual.items())},
                "m_quad": dict(sorted(self.m_quad.items())),
            },
            "auxiliary_primes_used": list(self.auxiliary_primes_used),
        }


def auxiliary_primes(curve: CurveModel, bound: int) -> List[int]:
    """Good primes below the bound not dividing the conductor, ascending."""
    return list(good_primes(curve, bound, exclude_conductor=True))


def alg_odd(curve: CurveModel, aux: List[int]) -> int:
    """M_odd = gcd over the pool of p * P_p^(f')(1)."""
    _require_aux(aux)
    g = 0
    for p in aux:
        g = math.gcd(g, abs(odd_subquotient_term(curve, frobenius_poly(curve, p))))
    if g == 0:
        raise EndomorphismSuspected(
            "alg_odd", f"P_p^(f')(1) vanished at every auxiliary prime <= {aux[-1]}")
    return g


def alg_related(curve: CurveModel, aux: List[int]) -> int:
    """M_related = gcd over the pool of p * Q_p^(f')(1) Q_p^(f')(p^f')."""
    _require_aux(aux)
    g = 0
    for p in aux:
        g = math.gcd(g, abs(related_term(curve, frobenius_poly(curve, p))))
    if g == 0:
        raise EndomorphismSuspected(
            "alg_related", f"R_p vanished at every auxiliary prime <= {aux[-1]}")
    return g


def alg_selfdual(curve: CurveModel, aux: List[int], hecke: HeckeTable) -> Dict[int, int]:
    """M(d) = gcd over the pool of p * Res(P_p, Q_d), per divisor level d."""
    _require_aux(aux)
    out: Dict[int, int] = {}
    for d in sorted(_selfdual_levels(curve.conductor)):
        g = 0
        for p in aux:
            F = frobenius_poly(curve, p)
            g = math.gcd(g, abs(selfdual_term(F, hecke.get(d, p))))
        if g == 0:
            raise EndomorphismSuspected(
                "alg_selfdual",
                f"Res(P_p, Q_{d}) vanished at every auxiliary prime (level {d})",
                site=str(d))
        out[d] = g
    return out


def alg_quad(curve: CurveModel, aux: List[int]) -> Dict[str, int]:
    """M_phi = gcd of p * a_p over auxiliary p with phi(p) = -1 and a_p != 0."""
    _require_aux(aux)
    out: Dict[str, int] = {}
    for phi in quadratic_characters(curve.conductor):
        g = 0
        inert_seen = False
        for p in aux:
            if phi(p) != -1:
                continue
            inert_seen = True
            a = frobenius_poly(curve, p).a
            if a != 0:
                g = math.gcd(g, p * abs(a))
        if g == 0:
            if inert_seen:
                raise EndomorphismSuspected(
                    "alg_quad", f"a_p = 0 at every auxiliary prime with {phi.label}(p) = -1",
                    site=phi.label)
            raise UnconstrainedCharacter(phi)
        out[phi.label] = g
    return out


def _require_aux(aux) -> None:
    if not aux:
        raise ValueError("auxiliary prime pool is empty")


def _selfdual_levels(N: int) -> List[int]:
    """All divisors d of N with d^2 <= N; zero-dimensional ones still get an
    (immediately trivial) stream so the report shows every M(d)."""
    from .arith import divisors

    return [d for d in divisors(N) if d * d <= N]


def possibly_nonsurjective(curve: CurveModel, config: Optional[SieveConfig] = None) -> SieveReport:
    """Run all four streams over a shared auxiliary pool and assemble the
    superset.

    Frobenius data is computed once per auxiliary prime and fed to every
    stream that is still running; scanning stops when all streams have hit
    the stability exit (or the pool is exhausted).  Output is deterministic
    for a fixed configuration.
    """
    cfg = config or SieveConfig()
    hecke = cfg.hecke if cfg.hecke is not None else HeckeTable()
    aux = auxiliary_primes(curve, cfg.aux_bound)
    _require_aux(aux)

    def stream():
        return _GcdStream(cfg.stability_window, cfg.smooth_bound)

    def running(s: _GcdStream) -> bool:
        return not (cfg.early_exit and s.done)

    odd = stream()
    related = stream()
    selfdual = {d: stream() for d in _selfdual_levels(curve.conductor)}
    characters = quadratic_characters(curve.conductor)
    quad = {phi.label: stream() for phi in characters}
    inert_seen = {phi.label: False for phi in characters}

    used: List[int] = []
    for p in aux:
        active_selfdual = [d for d, s in selfdual.items() if running(s)]
        active_quad = [phi for phi in characters if running(quad[phi.label])]
        if (not running(odd) and not running(related)
                and not active_selfdual and not active_quad):
            break
        used.append(p)
        F = frobenius_poly(curve, p)
        if running(odd):
            odd.feed(odd_subquotient_term(curve, F))
        if running(related):
            related.feed(related_term(curve, F))
        for d in active_selfdual:
            selfdual[d].feed(selfdual_term(F, hecke.get(d, p)))
        for phi in active_quad:
            if phi(p) == -1:
                inert_seen[phi.label] = True
                if F.a != 0:
                    quad[phi.label].feed(p * abs(F.a))

    if odd.value == 0:
        raise EndomorphismSuspected(
            "alg_odd", f"P_p^(f')(1) vanished at every auxiliary prime < {cfg.aux_bound}")
    if related.value == 0:
        raise EndomorphismSuspected(
            "alg_related", f"R_p vanished at every auxiliary prime < {cfg.aux_bound}")
    for d, s in selfdual.items():
        if s.value == 0:
            raise EndomorphismSuspected(
                "alg_selfdual",
                f"Res(P_p, Q_{d}) vanished at every auxiliary prime (level {d})",
                site=str(d))
    for phi in characters:
        if quad[phi.label].value == 0:
            if inert_seen[phi.label]:
                raise EndomorphismSuspected(
                    "alg_quad",
                    f"a_p = 0 at every auxiliary prime with {phi.label}(p) = -1",
                    site=phi.label)
            raise UnconstrainedCharacter(phi)

    provenance: Dict[int, set] = {}

    def tag(prime: int, reason: str) -> None:
        provenance.setdefault(prime, set()).add(reason)

    for prime in ALWAYS_INCLUDED:
        tag(prime, "always_included")
    for prime in factor_multiplicities(curve.conductor):
        tag(prime, "divides_conductor")
    for prime in factor_multiplicities(odd.value):
        tag(prime, "odd_subquotient")
    for prime in factor_multiplicities(related.value):
        tag(prime, "related_subquotients")
    for d, s in selfdual.items():
        for prime in factor_multiplicities(s.value):
            tag(prime, f"self_dual(level {d})")
    for phi in characters:
        for prime in factor_multiplicities(quad[phi.label].value):
            tag(prime, f"quad_character({phi.label})")

    return SieveReport(
        possibly_nonsurjective=tuple(sorted(provenance)),
        provenance={p: tuple(sorted(rs)) for p, rs in provenance.items()},
        m_odd=odd.value,
        m_related=related.value,
        m_selfdual={d: s.value for d, s in selfdual.items()},
        m_quad={phi.label: quad[phi.label].value for phi in characters},
        auxiliary_primes_used=tuple(used),
    )
