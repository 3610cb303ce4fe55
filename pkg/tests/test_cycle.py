import itertools
import math
import time

import numpy as np
import pytest

from hingeforge.cycle import (T1, T2, build_separating_cycle, build_union_graph, clearances, euler_tour,
                              forced_vertex_order, same_cyclic_order)
from hingeforge.dissect import unfold_subdivision
from hingeforge.errors import NonCrossingError
from conftest import ALL_POSITIVE, load_case


def cycle_of(name):
    P, A, B = load_case(name)
    G = build_union_graph(P, A, B)
    return P, G, build_separating_cycle(P, A, B, G)


@pytest.mark.parametrize("name", ALL_POSITIVE)
def test_union_graph_counts(name):
    P, G, _ = cycle_of(name)
    assert len(G.nodes) - G.n_edges + len(G.faces) == 2
    # two spanning trees on n vertices (plus degree-2 bends) always leave n faces
    assert len(G.faces) == P.n_vertices
    for gf in G.faces:
        assert gf.t1_path and gf.t2_path
        assert {G.tree_of(h) for h in gf.t1_path} == {T1}
        assert {G.tree_of(h) for h in gf.t2_path} == {T2}


def test_union_graph_rejects_crossing():
    P, A, B = load_case("cube_crossing")
    with pytest.raises(NonCrossingError):
        build_union_graph(P, A, B)


def test_clearance_closed_forms():
    # cube: tree B uses face diagonals, so the sharpest corner is pi/4 and the
    # closest vertex-edge pair is a cube corner against a diagonal
    _, G, _ = cycle_of("cube")
    cl = clearances(G)
    assert cl.alpha == pytest.approx(math.pi / 12, abs=1e-12)
    assert cl.epsilon == pytest.approx(math.sqrt(2) / 6, abs=1e-12)
    # doubly covered unit square with one diagonal per side
    _, G, _ = cycle_of("dc_square")
    assert clearances(G).epsilon == pytest.approx(math.sqrt(2) / 6, abs=1e-12)


def test_euler_tour_examples():
    assert euler_tour({"a": ["b"], "b": ["a", "c"], "c": ["b"]}, "a") == [
        ("a", "b"), ("b", "c"), ("c", "b"), ("b", "a")]
    star = {"c": ["x", "y", "z"], "x": ["c"], "y": ["c"], "z": ["c"]}
    assert euler_tour(star, "c") == [("c", "x"), ("x", "c"), ("c", "y"), ("y", "c"), ("c", "z"), ("z", "c")]


@pytest.mark.parametrize("name", ALL_POSITIVE)
def test_euler_tour_uses_each_half_edge_once(name):
    P, G, C = cycle_of(name)
    tour = C.tour
    edges = {frozenset(e) for e in tour}
    assert len(tour) == 2 * len(edges) == len(set(tour))
    assert all((v, u) in set(tour) for u, v in tour)
    assert all(tour[i][1] == tour[(i + 1) % len(tour)][0] for i in range(len(tour)))
    if name == "cube":
        assert len(tour) == 14


def ray_inside(pt, poly):
    x, y = pt
    inside = False
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        if (y0 > y) != (y1 > y) and x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
            inside = not inside
    return inside


@pytest.mark.parametrize("name", ALL_POSITIVE)
def test_cycle_separates_trees(name):
    t0 = time.perf_counter()
    P, G, C = cycle_of(name)
    assert time.perf_counter() - t0 < 1.0
    assert sorted(C.vertex_order) == list(range(P.n_vertices))
    # in net A the T1 cut is the outer boundary, so T2 lies inside the curve and T1 outside
    net = unfold_subdivision(G.S, T1)
    curve = [net.place[c].apply(xy) for c, xy in C.curve_cells]
    from hingeforge import geom
    assert geom.is_simple(curve, P.tol)
    k = np.arange(16) + 0.5
    for a, b in net.tree_image:
        for t in k / 16:
            assert ray_inside((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), curve)
    bd = net.boundary
    for a, b in zip(bd, bd[1:] + bd[:1]):
        for t in k / 16:
            assert not ray_inside((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), curve)


@pytest.mark.parametrize("name", ALL_POSITIVE)
def test_sidewalk_geometry(name):
    _, _, C = cycle_of(name)
    cl = C.clearance
    for w in C.sidewalks:
        U, V, p, q = (np.array(x, float) for x in (w.U, w.V, w.p, w.q))
        d = (V - U) / np.linalg.norm(V - U)
        for x in (p, q):
            off = d[0] * (x - U)[1] - d[1] * (x - U)[0]
            assert off == pytest.approx(cl.offset, abs=1e-9)
        ang_u = math.atan2(d[0] * (p - U)[1] - d[1] * (p - U)[0], d @ (p - U))
        ang_v = math.atan2(-d[0] * (q - V)[1] + d[1] * (q - V)[0], -d @ (q - V))
        assert ang_u == pytest.approx(cl.alpha, abs=1e-9)
        assert ang_v == pytest.approx(-cl.alpha, abs=1e-9)


def splits(walk_vertices, labels, u, w):
    """Does a chord u-w inside this face put one tree on each side?"""
    m = len(walk_vertices)
    for i in range(m):
        for j in range(m):
            if i == j or walk_vertices[i] != u or walk_vertices[j] != w:
                continue
            side1 = {labels[k % m] for k in range(i, i + (j - i) % m)}
            side2 = {labels[k % m] for k in range(j, j + (i - j) % m)}
            if len(side1) == 1 and len(side2) == 1 and side1 != side2:
                return True
    return False


def brute_force_orders(G):
    """All cyclic vertex orders whose consecutive chords each separate the
    two trees inside a distinct face of G."""
    S = G.S
    faces = [([S.h_origin[h] for h in gf.walk], [G.tree_of(h) for h in gf.walk]) for gf in G.faces]
    n = G.P.n_vertices
    found = []
    for perm in itertools.permutations(range(1, n)):
        order = (0,) + perm
        if perm and perm[0] > perm[-1]:
            continue
        used = set()
        ok = True
        for u, w in zip(order, order[1:] + order[:1]):
            cand = [fi for fi, (vs, ls) in enumerate(faces) if fi not in used
                    and (splits(vs, ls, u, w) or splits(vs, ls, w, u))]
            if not cand:
                ok = False
                break
            used.add(cand[0])
        if ok:
            found.append(list(order))
    return found


@pytest.mark.parametrize("name", ["tetrahedron", "dc_square", "dc_triangle", "cube", "octahedron"])
def test_forced_order_matches_brute_force(name):
    _, G, C = cycle_of(name)
    forced = forced_vertex_order(G)
    found = brute_force_orders(G)
    assert len(found) == 1
    assert same_cyclic_order(found[0], forced)
    assert same_cyclic_order(C.vertex_order, forced)


def test_same_cyclic_order():
    assert same_cyclic_order([0, 1, 2, 3], [2, 3, 0, 1])
    assert same_cyclic_order([0, 1, 2, 3], [3, 2, 1, 0])
    assert not same_cyclic_order([0, 1, 2, 3], [3, 2, 1, 0], reflect=False)
    assert not same_cyclic_order([0, 1, 2, 3], [0, 2, 1, 3])


def test_dc_triangle_order_is_boundary_order():
    _, G, C = cycle_of("dc_triangle")
    assert same_cyclic_order(C.vertex_order, [0, 1, 2])
    assert len(C.vertex_order) == 3


def test_cycle_is_deterministic():
    _, _, C1 = cycle_of("cube")
    P, A, B = load_case("cube")
    C2 = build_separating_cycle(P, A, B)
    assert C1.curve == C2.curve and C1.vertex_order == C2.vertex_order
