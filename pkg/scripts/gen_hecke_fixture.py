#!/usr/bin/env python3
"""Generate and verify the bundled Hecke charpoly fixture.

Every entry is computed twice where feasible and cross-checked:

  * dimensions <= 3: trace formula (power sums + Newton) AND modular
    symbols, asserted equal;
  * dimension 15 (level 217): modular symbols, with the first two power
    sums asserted against the trace formula.

The trace formula itself is validated against eta-product newforms and the
modular symbols against both (see traceformula.run_self_checks and the test
suite).  Results are cached per entry under scripts/cache/.

Usage: python3 scripts/gen_hecke_fixture.py [--out PATH]
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.dirname(__file__))

from g2image.arith import IntPoly, primes_below
from g2image.hecke_data import HeckeTable, load

import modsym
import traceformula as tf

CACHE_DIR = os.path.join(os.path.dirname(__file__), "cache")

# levels needed by the acceptance curves:
#   529 = 23^2           -> {23}           (all aux primes < 1000)
#   47089 = 7^2 * 31^2   -> {31, 49, 217}  (all aux primes < 1000)
#   15876 = 2^2 3^4 7^2  -> fourteen levels below sqrt(15876) = 126
DEEP_PRIME_BOUND = 1000
SHALLOW_PRIME_BOUND = 150

LEVELS_FULL = (23, 31, 49, 217)
LEVELS_SHALLOW = (14, 21, 27, 28, 36, 42, 49, 54, 63, 81, 84, 98, 108, 126)


def wanted_entries():
    out = []
    for d in LEVELS_FULL:
        for p in primes_below(DEEP_PRIME_BOUND):
            if p == 2 or d % p == 0:
                continue
            out.append((d, p))
    for d in LEVELS_SHALLOW:
        for p in primes_below(SHALLOW_PRIME_BOUND):
            if p == 2 or d % p == 0:
                continue
            if (d, p) not in out:
                out.append((d, p))
    return sorted(set(out))


def compute_entry(d: int, p: int) -> IntPoly:
    cache = os.path.join(CACHE_DIR, f"new_{d}_{p}.json")
    if os.path.exists(cache):
        with open(cache) as fh:
            return IntPoly(json.load(fh))
    dim = tf.dim_new(d)
    h_msym = modsym.new_charpoly(d, p)
    assert h_msym.degree == dim, (d, p, h_msym.degree, dim)
    if dim <= 3:
        h_tf = tf.newspace_charpoly(d, p)
        assert h_tf == h_msym, f"trace formula vs modular symbols clash at ({d},{p})"
    else:
        tr = -h_msym[dim - 1]
        assert tr == tf.trace_tn_new(d, p), f"trace clash at ({d},{p})"
        s2 = tr * tr - 2 * h_msym[dim - 2]
        assert s2 == tf.trace_tn_new(d, p * p) + dim * p, f"2nd power sum clash at ({d},{p})"
    os.makedirs(CACHE_DIR, exist_ok=True)
    with open(cache, "w") as fh:
        json.dump(list(h_msym.coeffs), fh)
    return h_msym


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "src", "g2image", "data", "hecke_fixture.csv"))
    args = ap.parse_args()

    tf.run_self_checks(verbose=False)
    print("trace formula self-checks passed")

    # smallest-prime-factor sieve sized for the deepest Newton power needed
    spf_bound = max(
        4 * max(primes_below(DEEP_PRIME_BOUND)) ** 2 + 10,
        4 * max(primes_below(SHALLOW_PRIME_BOUND)) ** 3 + 10,
    )
    tf.ensure_spf(spf_bound)

    entries = wanted_entries()
    print(f"{len(entries)} entries to compute")
    table = HeckeTable(metadata=(
        "Hecke T_p characteristic polynomials on S_2^new(Gamma_0(level)).\n"
        "Computed by scripts/gen_hecke_fixture.py: weight-2 modular symbols\n"
        "cross-verified against the Eichler-Selberg trace formula and\n"
        "eta-product newforms; regenerate with that script."))
    t0 = time.time()
    for i, (d, p) in enumerate(entries):
        table.entries[(d, p)] = compute_entry(d, p)
        if (i + 1) % 50 == 0:
            print(f"  {i + 1}/{len(entries)} ({time.time() - t0:.0f}s)")
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    table.save(args.out)
    # run the package-side validation (monicity, degree consistency, Weil)
    loaded = load(args.out)
    assert len(loaded.entries) == len(entries)
    print(f"wrote {args.out}: {len(entries)} entries, validated")


if __name__ == "__main__":
    main()
