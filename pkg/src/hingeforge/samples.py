"""Parametric inputs: boxes, doubly covered convex polygons and jittered
octahedra, each with a pair of non-crossing cut trees.

Every builder returns ``(Polyhedron, tree A dict, tree B dict)``. Trees are
plain dicts in the surface-drawing format, so the same values can be written
to disk.
"""

from __future__ import annotations

import math

import numpy as np

from .surface import Polyhedron


def _anchor(i):
    return {"kind": "vertex", "ref": i}


def tree_dict(n, edges):
    """``edges`` items are ``(u, v)`` or ``(u, v, carrier_face)`` between vertex ids."""
    out = []
    for e in edges:
        rec = {"from": f"v{e[0]}", "to": f"v{e[1]}", "polyline": []}
        if len(e) > 2:
            rec["carrier_faces"] = [e[2]]
        out.append(rec)
    return {"nodes": [{"id": f"v{i}", "anchor": _anchor(i)} for i in range(n)], "edges": out}


def box(dx, dy, dz):
    V = [(0, 0, 0), (dx, 0, 0), (dx, dy, 0), (0, dy, 0),
         (0, 0, dz), (dx, 0, dz), (dx, dy, dz), (0, dy, dz)]
    F = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    A = tree_dict(8, [(0, 4), (1, 5), (2, 6), (3, 7), (5, 6), (6, 7), (7, 4)])
    B = tree_dict(8, [(0, 1), (1, 2), (2, 3), (4, 5), (1, 4), (3, 6), (0, 7)])
    return Polyhedron(V, F), A, B


def convex_polygon(rng, n):
    """Random convex n-gon inscribed in a random ellipse, counterclockwise."""
    t = np.sort(rng.uniform(0, 2 * math.pi, n))
    while np.min(np.diff(np.append(t, t[0] + 2 * math.pi))) < 0.3:
        t = np.sort(rng.uniform(0, 2 * math.pi, n))
    a, b = rng.uniform(0.5, 2.0, 2)
    return [(float(a * math.cos(x)), float(b * math.sin(x))) for x in t]


def doubly_covered(poly):
    """Boundary path as tree A; closing edge plus diagonal fans as tree B."""
    n = len(poly)
    if n < 4:
        raise ValueError("need at least 4 corners")
    V = [(x, y, 0.0) for x, y in poly]
    F = [tuple(range(n)), tuple(reversed(range(n)))]
    A = tree_dict(n, [(i, i + 1) for i in range(n - 1)])
    B = [(n - 1, 0), (1, n - 1, 1)] + [(0, k, 0) for k in range(2, n - 1)]
    return Polyhedron(V, F), A, tree_dict(n, B)


OCTA_V = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
OCTA_F = [(0, 2, 4), (0, 4, 3), (0, 5, 2), (0, 3, 5), (1, 4, 2), (1, 3, 4), (1, 2, 5), (1, 5, 3)]
OCTA_A = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 5)]
OCTA_B = [(0, 5), (1, 3), (1, 4), (2, 4), (3, 5)]

SADDLE_V = [(1, 0, 1.5), (0, 1, -1.5), (-1, 0, 1.5), (0, -1, -1.5), (0, 0, 1), (0, 0, -1)]
SADDLE_F = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4), (1, 0, 5), (2, 1, 5), (3, 2, 5), (0, 3, 5)]
SADDLE_A = [(0, 1), (0, 4), (1, 5), (2, 5), (3, 4)]
SADDLE_B = [(0, 5), (1, 4), (2, 3), (2, 4), (3, 5)]


def jittered(rng, base, faces, A, B, amount=0.15):
    V = np.asarray(base, float) + rng.uniform(-amount, amount, (len(base), 3))
    return Polyhedron(V, faces), tree_dict(len(base), A), tree_dict(len(base), B)


def octahedron(rng=None, amount=0.15):
    if rng is None:
        return Polyhedron(OCTA_V, OCTA_F), tree_dict(6, OCTA_A), tree_dict(6, OCTA_B)
    return jittered(rng, OCTA_V, OCTA_F, OCTA_A, OCTA_B, amount)


def saddle(rng=None, amount=0.1):
    if rng is None:
        return Polyhedron(SADDLE_V, SADDLE_F), tree_dict(6, SADDLE_A), tree_dict(6, SADDLE_B)
    return jittered(rng, SADDLE_V, SADDLE_F, SADDLE_A, SADDLE_B, amount)


def random_case(rng):
    """One random input; the kind cycles through all builders."""
    kind = int(rng.integers(4))
    if kind == 0:
        return "box", box(*rng.uniform(0.4, 2.5, 3))
    if kind == 1:
        return "dc_polygon", doubly_covered(convex_polygon(rng, int(rng.integers(4, 8))))
    if kind == 2:
        return "octahedron", octahedron(rng)
    return "saddle", saddle(rng)
