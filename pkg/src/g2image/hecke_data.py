"""Hecke characteristic-polynomial tables for the self-dual sieve.

The table maps (level d, prime p) to the characteristic polynomial H_{d,p}(z)
of the Hecke operator T_p acting on the weight-2 new cuspidal subspace of
level d.  These are consumed as data: computing them (modular symbols) is out
of scope for the package; a dev script regenerates and verifies the bundled
fixture.

File format: headerless CSV with columns level,prime,polynomial, where the
polynomial uses explicit z monomials and * for multiplication, e.g.
``23,5,z^2+2*z-1``.  Lines starting with # are metadata comments.  The
canonical writer sorts by (level, prime) and prints descending powers.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .arith import IntPoly, divisors

# Levels with dim S_2^new(Gamma_0(d)) = 0 because X_0(d) has genus 0.  Any
# other level with no table entry is an error, never assumed zero-dimensional.
ZERO_DIM_NEWSPACE_LEVELS = frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25})


class HeckeDataError(ValueError):
    """Parse or invariant failure in a Hecke table file."""


class MissingHeckeData(Exception):
    """A required (level, prime) entry is absent from the table."""

    def __init__(self, level: int, prime: int):
        self.level = level
        self.prime = prime
        super().__init__(f"no Hecke entry for level {level} at p = {prime}")


class MissingLevel(Exception):
    """The remote source has no newform data for the requested level."""


_TERM_RE = re.compile(r"^([+-]?\d*)(?:\*?(z)(?:\^(\d+))?)?$")


def parse_poly(text: str) -> IntPoly:
    """Parse ``z^2+2*z-1`` style integer polynomials in z."""
    s = text.replace(" ", "")
    if not s:
        raise HeckeDataError("empty polynomial")
    # split keeping signs: insert separators before +/- that start a term
    chunks = re.findall(r"[+-]?[^+-]+", s)
    coeffs: Dict[int, int] = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (m.group(1) in ("", "+", "-") and not m.group(2)):
            raise HeckeDataError(f"cannot parse term {chunk!r} in {text!r}")
        sign_mag, zvar, exp = m.groups()
        if zvar is None:
            deg = 0
            coef = int(sign_mag)
        else:
            deg = int(exp) if exp is not None else 1
            if sign_mag in ("", "+"):
                coef = 1
            elif sign_mag == "-":
                coef = -1
            else:
                coef = int(sign_mag)
        coeffs[deg] = coeffs.get(deg, 0) + coef
    out = [0] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c
    return IntPoly(out)


def format_poly(poly: IntPoly) -> str:
    """Canonical descending-power rendering matching parse_poly's grammar."""
    if poly.is_zero:
        return "0"
    parts = []
    for i in range(poly.degree, -1, -1):
        c = poly[i]
        if c == 0:
            continue
        if i == 0:
            body = str(abs(c))
        else:
            zpow = "z" if i == 1 else f"z^{i}"
            body = zpow if abs(c) == 1 else f"{abs(c)}*{zpow}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


@dataclass
class HeckeTable:
    """Validated map (level, prime) -> charpoly of T_p on S_2^new(Gamma_0(level))."""

    entries: Dict[Tuple[int, int], IntPoly] = field(default_factory=dict)
    metadata: str = ""

    def has(self, level: int, prime: int) -> bool:
        return (level, prime) in self.entries

    def get(self, level: int, prime: int) -> IntPoly:
        if level in ZERO_DIM_NEWSPACE_LEVELS:
            return IntPoly([1])
        try:
            return self.entries[(level, prime)]
        except KeyError:
            raise MissingHeckeData(level, prime) from None

    def levels(self):
        return sorted({d for d, _ in self.entries})

    def dimension(self, level: int) -> Optional[int]:
        """deg H_{d,p} for any p present, i.e. dim S_2^new; None if unknown."""
        if level in ZERO_DIM_NEWSPACE_LEVELS:
            return 0
        for (d, _), poly in self.entries.items():
            if d == level:
                return poly.degree
        return None

    def save(self, path) -> None:
        lines = []
        for line in self.metadata.splitlines():
            lines.append(f"# {line}" if not line.startswith("#") else line)
        for (d, p) in sorted(self.entries):
            lines.append(f"{d},{p},{format_poly(self.entries[(d, p)])}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def load(path) -> HeckeTable:
    """Load and validate a Hecke table; violations reject the file with the
    offending line number."""
    entries: Dict[Tuple[int, int], IntPoly] = {}
    meta_lines = []
    with open(path) as fh:
        for lineno, rawline in enumerate(fh, start=1):
            line = rawline.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta_lines.append(line.lstrip("# "))
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise HeckeDataError(f"{path}:{lineno}: expected level,prime,polynomial")
            try:
                d, p = int(parts[0]), int(parts[1])
            except ValueError:
                raise HeckeDataError(f"{path}:{lineno}: non-integer level or prime") from None
            try:
                poly = parse_poly(parts[2])
            except HeckeDataError as exc:
                raise HeckeDataError(f"{path}:{lineno}: {exc}") from None
            if not poly.is_monic:
                raise HeckeDataError(f"{path}:{lineno}: H_{{{d},{p}}} is not monic")
            if (d, p) in entries:
                raise HeckeDataError(f"{path}:{lineno}: duplicate entry for ({d}, {p})")
            entries[(d, p)] = poly
    table = HeckeTable(entries=entries, metadata="\n".join(meta_lines))
    _validate(table, path)
    return table


def _validate(table: HeckeTable, origin="<table>") -> None:
    degrees: Dict[int, int] = {}
    for (d, p), poly in sorted(table.entries.items()):
        if d in degrees and degrees[d] != poly.degree:
            raise HeckeDataError(
                f"{origin}: level {d} has entries of degree {degrees[d]} and "
                f"{poly.degree}; dim S_2^new is independent of p"
            )
        degrees.setdefault(d, poly.degree)
        _check_weil_roots(poly, d, p, origin)


def _check_weil_roots(poly: IntPoly, d: int, p: int, origin) -> None:
    """All roots of the Hecke L-polynomial of H must have |root|^2 = p.

    Checked in 53-bit floating point on the sqrt(p)-rescaled polynomial, so
    the tolerance 1e-6 is on |root|^2 / p - 1.
    """
    if poly.degree == 0:
        return
    from .sieve import hecke_q_poly  # deferred: sieve imports this module

    q = hecke_q_poly(poly, p)
    scale = [float(q[k]) / p ** ((q.degree - k) / 2.0) for k in range(q.degree, -1, -1)]
    roots = np.roots(scale)
    worst = float(np.max(np.abs(np.abs(roots) ** 2 - 1.0)))
    if worst > 1e-6:
        raise HeckeDataError(
            f"{origin}: H_{{{d},{p}}} fails the Weil root check (off by {worst:.2e}); "
            "corrupt or mislabelled data"
        )


def required_levels(N: int) -> set:
    """Divisors d of N with d^2 <= N whose newspace is not known to vanish.

    Levels in the built-in genus-zero list are never required; every other
    divisor below sqrt(N) needs a table entry (whose degree may still be 0).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    return {d for d in divisors(N) if d * d <= N and d not in ZERO_DIM_NEWSPACE_LEVELS}


# -- optional remote provisioning -------------------------------------------

DEFAULT_ENDPOINT = os.environ.get(
    "G2IMAGE_HECKE_ENDPOINT", "https://www.lmfdb.org/api/mf_newforms"
)


def fetch_remote(level: int, prime: int, endpoint: Optional[str] = None,
                 cache_dir: Optional[str] = None, fetcher=None) -> IntPoly:
    """Fetch H_{level,prime} from the public modular-forms database.

    The charpoly is assembled as the product over Galois orbits of each
    orbit's T_p factor, reconstructed from the orbit's integral trace-form
    data (see README for the exact JSON contract).  Results land in
    cache_dir keyed by (level, prime) so reruns are offline; cache writes of
    identical content are last-writer-wins.

    ``fetcher(url, params) -> dict`` may be injected for testing; by default
    an HTTPS GET via requests.
    """
    if cache_dir:
        cached = _cache_path(cache_dir, level, prime)
        if os.path.exists(cached):
            with open(cached) as fh:
                return parse_poly(fh.read().strip())
    endpoint = endpoint or DEFAULT_ENDPOINT
    if fetcher is None:
        fetcher = _requests_fetcher
    payload = fetcher(endpoint, {
        "level": f"i{level}",
        "weight": "i2",
        "char_order": "i1",
        "_fields": "label,hecke_charpolys",
        "_format": "json",
    })
    rows = payload.get("data")
    if rows is None:
        raise HeckeDataError(f"malformed response for level {level}: no data field")
    if not rows:
        raise MissingLevel(f"no weight-2 trivial-character newforms recorded for level {level}")
    product = IntPoly([1])
    for row in rows:
        charpolys = row.get("hecke_charpolys") or {}
        coeffs = charpolys.get(str(prime))
        if coeffs is None:
            raise MissingHeckeData(level, prime)
        product = product * IntPoly(coeffs)
    if not product.is_monic:
        raise HeckeDataError(f"remote data for ({level}, {prime}) is not monic")
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        with open(_cache_path(cache_dir, level, prime), "w") as fh:
            fh.write(format_poly(product) + "\n")
    return product


def _cache_path(cache_dir: str, level: int, prime: int) -> str:
    return os.path.join(cache_dir, f"hecke_{level}_{prime}.txt")


def _requests_fetcher(url: str, params: dict) -> dict:
    import requests

    resp = requests.get(url, params=params, timeout=30)
    resp.raise_for_status()
    return resp.json()


def bundled_table() -> HeckeTable:
    """The fixture table shipped with the package (acceptance levels only).

    Missing file degrades to an empty table: curves whose conductor needs no
    positive-dimensional level still run, everything else raises
    MissingHeckeData at the first required entry.
    """
    path = os.path.join(os.path.dirname(__file__), "data", "hecke_fixture.csv")
    if not os.path.exists(path):
        return HeckeTable(metadata="bundled fixture not present")
    return load(path)
