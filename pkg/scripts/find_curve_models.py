#!/usr/bin/env python3
"""Recover the fixture curve models by constrained coefficient search.

Each target is pinned by its exact minimal discriminant (the third component
of its database label) under the integral-model normalization
disc(4f + h^2) = 2^12 * disc(C) for degree-6 models and 2^8 * disc(C) for
degree-5 models, and then confirmed behaviorally (pipeline outputs /
point-count agreement with level-23 Hecke traces for the modular curve).

The search space is h with coefficients in {0, 1} (the reduced-form
convention) and f with coefficients in a box, widened until all targets are
found.  Raw discriminants are filtered in float64 via batched Sylvester
determinants, and survivors re-checked exactly.

Usage: python3 scripts/find_curve_models.py [--box 3] [--out tests/fixtures/curves.csv]
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.dirname(__file__))

from g2image.arith import IntPoly
from g2image.frobenius import CurveModel, count_points, is_good_prime

# label -> (conductor, |disc|)
TARGETS = {
    "529.a.529.1": (529, 529),
    "743.a.743.1": (743, 743),
    "1923.a.1923.1": (1923, 1923),
    "976.a.999424.1": (976, 999424),
    "15876.a.15876.1": (15876, 15876),
    "464.a.464.1": (464, 464),
}


def sylvester_float(g_rows: np.ndarray, degree: int) -> np.ndarray:
    """|disc| of each degree-`degree` polynomial row (ascending coeffs),
    via float64 Sylvester determinants of (g, g')."""
    n = degree
    K = g_rows.shape[0]
    size = 2 * n - 1
    mat = np.zeros((K, size, size))
    desc = g_rows[:, ::-1]  # descending: g_n ... g_0
    dg = desc[:, :-1] * np.arange(n, 0, -1)[None, :]
    for i in range(n - 1):
        mat[:, i, i:i + n + 1] = desc
    for i in range(n):
        mat[:, n - 1 + i, i:i + n] = dg
    det = np.linalg.det(mat)
    lc = g_rows[:, degree].astype(np.float64)
    return np.abs(det / lc)


def search(box: int, targets: dict) -> dict:
    """{label: [(f, h), ...]} candidates matching |disc| exactly."""
    want6 = {}
    want5 = {}
    for label, (_, disc) in targets.items():
        want6[label] = 4096 * disc
        want5[label] = 256 * disc
    found = {label: [] for label in targets}

    coeff_range = np.arange(-box, box + 1, dtype=np.int64)
    f_low_grid = np.array(list(itertools.product(coeff_range, repeat=5)), dtype=np.int64)

    h_patterns = [np.array(bits, dtype=np.int64)
                  for bits in itertools.product((0, 1), repeat=4)]

    for h in h_patterns:
        h_poly = IntPoly(h.tolist())
        hh = np.zeros(7, dtype=np.int64)
        conv = np.convolve(h, h)
        hh[: len(conv)] = conv
        for f5 in coeff_range:
            for f6 in coeff_range:
                if h[3] == 0 and f6 == 0 and f5 == 0:
                    continue  # degree < 5
                g = 4 * np.concatenate([f_low_grid,
                                        np.full((len(f_low_grid), 1), f5),
                                        np.full((len(f_low_grid), 1), f6)], axis=1) + hh
                lc6 = g[:, 6] != 0
                for degree, sel in ((6, lc6), (5, ~lc6 & (g[:, 5] != 0))):
                    rows = g[sel][:, : degree + 1]
                    if rows.shape[0] == 0:
                        continue
                    discs = sylvester_float(rows, degree)
                    wanted = want6 if degree == 6 else want5
                    for label, dval in wanted.items():
                        hits = np.nonzero(np.isclose(discs, dval, rtol=1e-9))[0]
                        if hits.size == 0:
                            continue
                        frows = np.concatenate(
                            [f_low_grid[sel],
                             np.full((int(sel.sum()), 1), f5),
                             np.full((int(sel.sum()), 1), f6)], axis=1)
                        for hit in hits:
                            f_poly = IntPoly(frows[hit].tolist())
                            gp = 4 * f_poly + h_poly * h_poly
                            try:
                                exact = abs(gp.discriminant())
                            except ValueError:
                                continue
                            if exact == dval:
                                found[label].append((f_poly, h_poly))
    return found


def behavioral_checks(label: str, f: IntPoly, h: IntPoly) -> bool:
    """Cheap decisive filters before the full pipeline run."""
    conductor = TARGETS[label][0]
    try:
        curve = CurveModel(f=f, h=h, conductor=conductor, label=label)
    except ValueError:
        return False
    if label == "529.a.529.1":
        # X_0(23): point counts must match the level-23 Hecke traces
        from traceformula import trace_tn

        for p in (3, 5, 7, 11, 13):
            if not is_good_prime(curve, p):
                return False
            if count_points(curve, p, 1) != p + 1 - trace_tn(23, p):
                return False
    return True


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--box", type=int, default=3)
    ap.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "tests", "fixtures", "curves.csv"))
    ap.add_argument("--labels", nargs="*", default=sorted(TARGETS))
    args = ap.parse_args()

    targets = {k: TARGETS[k] for k in args.labels}
    found = search(args.box, targets)
    lines = []
    for label in sorted(targets):
        cands = [(f, h) for f, h in found[label] if behavioral_checks(label, f, h)]
        print(f"{label}: {len(found[label])} disc matches, {len(cands)} after checks")
        for f, h in cands[:6]:
            print(f"   f={list(f.coeffs)} h={list(h.coeffs)}")
        if cands:
            f, h = min(cands, key=lambda fh: (sum(abs(c) for c in fh[0].coeffs),
                                              fh[0].coeffs, fh[1].coeffs))
            fs = ";".join(str(c) for c in f.coeffs)
            hs = ";".join(str(c) for c in h.coeffs) or "0"
            lines.append(f"{label},{fs},{hs},{targets[label][0]}")
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(lines)} curves)")


if __name__ == "__main__":
    main()
