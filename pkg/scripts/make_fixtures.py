"""Write the mesh and cut-tree fixtures into fixtures/.

Each fixture is ``<name>.off`` plus ``<name>_A.json`` and ``<name>_B.json``.
Negative fixtures reuse a mesh and add a single bad tree file.
Run from the repository root: ``python3 scripts/make_fixtures.py``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from hingeforge.surface import format_off

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def orient_outward(vertices, faces):
    """Reorder each face of a convex solid so it runs counterclockwise from outside."""
    V = np.asarray(vertices, float)
    c = V.mean(axis=0)
    out = []
    for f in faces:
        p = V[list(f)]
        n = np.cross(p[1] - p[0], p[2] - p[0])
        out.append(list(f) if np.dot(n, p.mean(axis=0) - c) > 0 else list(f)[::-1])
    return out


def V(i):
    return {"kind": "vertex", "ref": i}


def E(u, v, t):
    return {"kind": "edge", "ref": [u, v], "params": [t]}


def F(f, w):
    return {"kind": "face", "ref": f, "params": list(w)}


def tree(n, edges, extra_nodes=()):
    """``edges`` items: (u, v) or (u, v, polyline anchors, carrier faces)."""
    nodes = [{"id": f"v{i}", "anchor": V(i)} for i in range(n)]
    nodes += [{"id": nid, "anchor": a} for nid, a in extra_nodes]
    out = []
    for e in edges:
        u, v = e[0], e[1]
        rec = {"from": u if isinstance(u, str) else f"v{u}",
               "to": v if isinstance(v, str) else f"v{v}",
               "polyline": list(e[2]) if len(e) > 2 else []}
        if len(e) > 3:
            rec["carrier_faces"] = list(e[3])
        out.append(rec)
    return {"nodes": nodes, "edges": out}


def cube():
    verts = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
             (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    faces = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    A = tree(8, [(0, 4), (1, 5), (2, 6), (3, 7), (5, 6), (6, 7), (7, 4)])
    B = tree(8, [(0, 1), (1, 2), (2, 3), (4, 5), (1, 4), (3, 6), (0, 7)])
    return verts, faces, A, B


def tetrahedron():
    verts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    faces = orient_outward(verts, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    A = tree(4, [(0, 1), (0, 2), (0, 3)])
    B = tree(4, [(1, 2), (2, 3), (0, 3, [E(1, 3, 0.5)])])
    return verts, faces, A, B


def doubly_covered(poly):
    verts = [(x, y, 0.0) for x, y in poly]
    n = len(poly)
    return verts, [tuple(range(n)), tuple(reversed(range(n)))]


def dc_triangle():
    verts, faces = doubly_covered([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
    A = tree(3, [(0, 1), (1, 2)])
    B = tree(3, [(2, 0), (1, 0, [F(0, (1 / 3, 1 / 3, 1 / 3))])])
    return verts, faces, A, B


def dc_square():
    verts, faces = doubly_covered([(0, 0), (1, 0), (1, 1), (0, 1)])
    A = tree(4, [(0, 1), (1, 2), (2, 3)])
    B = tree(4, [(3, 0), (0, 2, [], [0]), (1, 3, [], [1])])
    return verts, faces, A, B


def octahedron():
    verts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    tri = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    faces = orient_outward(verts, tri)
    A = tree(6, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 5)])
    B = tree(6, [(0, 5), (1, 3), (1, 4), (2, 4), (3, 5)])
    return verts, faces, A, B


def saddle():
    """Octahedron with its equator pushed up and down alternately; both apexes
    carry more than 2 pi of angle."""
    verts = [(1, 0, 1.5), (0, 1, -1.5), (-1, 0, 1.5), (0, -1, -1.5), (0, 0, 1), (0, 0, -1)]
    faces = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4), (1, 0, 5), (2, 1, 5), (3, 2, 5), (0, 3, 5)]
    A = tree(6, [(0, 1), (0, 4), (1, 5), (2, 5), (3, 4)])
    B = tree(6, [(0, 5), (1, 4), (2, 3), (2, 4), (3, 5)])
    return verts, faces, A, B


POSITIVE = {
    "cube": cube,
    "tetrahedron": tetrahedron,
    "dc_triangle": dc_triangle,
    "dc_square": dc_square,
    "octahedron": octahedron,
    "saddle": saddle,
}


def negatives():
    """Bad tree pairs on positive meshes: name -> (mesh, A, B)."""
    out = {}
    # front-face diagonals 0-5 and 1-4 cross at the face centre
    out["cube_crossing"] = (
        "cube",
        tree(8, [(0, 5, [], [2]), (5, 6), (6, 7), (7, 4), (2, 6), (3, 7), (1, 5)]),
        tree(8, [(1, 4, [], [2]), (0, 1), (1, 2), (2, 3), (4, 5), (2, 7, [], [4]), (1, 6, [], [3])]),
    )
    # around vertex 0 the edges alternate A, B, A, B
    out["cube_interleaved"] = (
        "cube",
        tree(8, [(0, 1), (0, 4), (1, 2), (2, 3), (3, 7), (6, 7), (5, 6)]),
        tree(8, [(0, 3), (0, 5, [], [2]), (4, 5), (1, 5), (2, 6), (4, 7), (3, 6, [], [4])]),
    )
    out["cube_nonspanning"] = ("cube", tree(8, [(0, 4), (1, 5), (2, 6), (3, 7), (5, 6), (6, 7)]), cube()[3])
    # every edge at vertex 0 is cut, so both apex leaves fold over each other
    out["saddle_overlap"] = (
        "saddle",
        tree(6, [(0, 1), (0, 3), (0, 4), (0, 5), (1, 2)]),
        tree(6, [(0, 4, [F(0, (1 / 3, 1 / 3, 1 / 3))]), (2, 3), (3, 4), (1, 4), (2, 5)]),
    )
    return out


def main():
    OUT.mkdir(exist_ok=True)
    for name, fn in POSITIVE.items():
        verts, faces, A, B = fn()
        (OUT / f"{name}.off").write_text(format_off(verts, faces))
        (OUT / f"{name}_A.json").write_text(json.dumps(A, indent=1) + "\n")
        (OUT / f"{name}_B.json").write_text(json.dumps(B, indent=1) + "\n")
    for name, (mesh, A, B) in negatives().items():
        (OUT / f"{name}.mesh").write_text(mesh + "\n")
        (OUT / f"{name}_A.json").write_text(json.dumps(A, indent=1) + "\n")
        (OUT / f"{name}_B.json").write_text(json.dumps(B, indent=1) + "\n")
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
