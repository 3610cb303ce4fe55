"""Run the forward pipeline and the gluing check over the fixtures and a
seeded batch of random inputs, then print a summary table.

    python3 scripts/run_experiments.py --cases 130 --seed 20261015
"""

from __future__ import annotations

import argparse
import collections
from pathlib import Path

import numpy as np

from hingeforge.dissect import build_dissection, classify, hinge_angles
from hingeforge.errors import NotANetError
from hingeforge.glue import roundtrip_check
from hingeforge.noncross import load_tree, tree_from_dict
from hingeforge.samples import random_case
from hingeforge.surface import load_polyhedron

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
NAMES = ["cube", "tetrahedron", "dc_triangle", "dc_square", "octahedron", "saddle"]


def fixture_rows():
    for name in NAMES:
        P = load_polyhedron((FIXTURES / f"{name}.off").read_text())
        A = load_tree(P, (FIXTURES / f"{name}_A.json").read_text())
        B = load_tree(P, (FIXTURES / f"{name}_B.json").read_text())
        rep = roundtrip_check(P, A, B)
        D = build_dissection(P, A, B).D
        c = classify(D, hinge_angles(D))
        yield name, D.n, c.simple, c.monotone, rep.ok, rep.convex, rep.residual


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=130)
    ap.add_argument("--seed", type=int, default=20261015)
    args = ap.parse_args(argv)

    print(f"{'fixture':<12} {'pieces':>6} {'simple':>6} {'monotone':>8} {'glued':>5} {'convex':>6} {'residual':>9}")
    for name, n, simple, mono, ok, convex, res in fixture_rows():
        print(f"{name:<12} {n:>6} {simple!s:>6} {mono!s:>8} {ok!s:>5} {convex!s:>6} {res:>9.1e}")

    rng = np.random.default_rng(args.seed)
    tally = collections.Counter()
    violations = 0
    for _ in range(args.cases):
        kind, (P, a, b) = random_case(rng)
        try:
            D = build_dissection(P, tree_from_dict(P, a), tree_from_dict(P, b)).D
        except NotANetError:
            tally[kind, "not a net"] += 1
            continue
        c = classify(D, hinge_angles(D))
        tally[kind, "monotone" if c.monotone else "non-monotone"] += 1
        violations += c.simple and not c.monotone
    print(f"\nrandom inputs (seed {args.seed}, {args.cases} cases)")
    for (kind, what), k in sorted(tally.items()):
        print(f"  {kind:<11} {what:<13} {k:>4}")
    print(f"  simple but not monotone: {violations}")
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
