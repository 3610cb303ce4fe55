"""Search mesh-edge spanning-tree pairs that run through the forward pipeline.

Used to pick fixture pairs (e.g. the octahedron) and to find cut trees whose
unfolding overlaps. Deterministic: trees are enumerated in lexicographic order.

    python3 scripts/search_trees.py fixtures/octahedron.off --limit 3
    python3 scripts/search_trees.py fixtures/some.off --overlap
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from hingeforge.dissect import build_dissection, unfold_net
from hingeforge.errors import HingeForgeError, NotANetError
from hingeforge.noncross import tree_from_dict
from hingeforge.surface import load_polyhedron


def spanning_trees(n, edges):
    for combo in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for i in combo:
            a, b = (find(x) for x in edges[i])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            yield [edges[i] for i in combo]


def as_tree(n, es):
    return {"nodes": [{"id": f"v{i}", "anchor": {"kind": "vertex", "ref": i}} for i in range(n)],
            "edges": [{"from": f"v{a}", "to": f"v{b}", "polyline": []} for a, b in es]}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mesh")
    ap.add_argument("--limit", type=int, default=1)
    ap.add_argument("--overlap", action="store_true", help="report trees whose unfolding overlaps")
    args = ap.parse_args(argv)
    P = load_polyhedron(open(args.mesh).read())
    n = P.n_vertices
    edges = list(P.edges)
    trees = list(spanning_trees(n, edges))
    found = 0
    if args.overlap:
        for es in trees:
            try:
                unfold_net(P, tree_from_dict(P, as_tree(n, es)))
            except NotANetError:
                print(json.dumps(es))
                found += 1
                if found >= args.limit:
                    return 0
        return 1
    for ta, tb in itertools.combinations(trees, 2):
        if set(ta) & set(tb):
            continue
        A, B = tree_from_dict(P, as_tree(n, ta)), tree_from_dict(P, as_tree(n, tb))
        try:
            build_dissection(P, A, B)
        except HingeForgeError:
            continue
        print(json.dumps({"A": ta, "B": tb}))
        found += 1
        if found >= args.limit:
            return 0
    return 1 if not found else 0


if __name__ == "__main__":
    sys.exit(main())
