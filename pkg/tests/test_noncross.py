import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hingeforge import samples
from hingeforge.errors import FormatError
from hingeforge.noncross import check_noncrossing, tree_from_dict, validate_tree
from conftest import ALL_POSITIVE, NEGATIVE, load_case


def to3d(P, p):
    V = P.vertices
    if p.kind == "vertex":
        return V[p.ref]
    if p.kind == "edge":
        a, b = P.edges[p.ref]
        return (1 - p.params[0]) * V[a] + p.params[0] * V[b]
    return sum(w * V[v] for w, v in zip(p.params, P.faces[p.ref]))


def seg_distance(p0, p1, q0, q1):
    """Closest distance between 3D segments and the parameter on the first."""
    best = (math.inf, 0.0)
    for s in np.linspace(0, 1, 201):
        x = p0 + s * (p1 - p0)
        d = q1 - q0
        t = np.clip((x - q0) @ d / (d @ d), 0, 1)
        best = min(best, (float(np.linalg.norm(x - (q0 + t * d))), s))
    return best


def oracle_crossings(P, T1, T2):
    bad = []
    for s1 in T1.segments:
        a0, a1 = to3d(P, s1.p), to3d(P, s1.q)
        for s2 in T2.segments:
            b0, b1 = to3d(P, s2.p), to3d(P, s2.q)
            d, s = seg_distance(a0, a1, b0, b1)
            if d > 1e-6:
                continue
            x = a0 + s * (a1 - a0)
            if any(np.linalg.norm(x - P.vertices[v]) < 1e-3 for v in range(P.n_vertices)):
                continue
            bad.append((s1.edge, s2.edge))
    return bad


def star_faces(P, v):
    """Faces around v in counterclockwise order seen from outside."""
    faces = [f for f in range(len(P.faces)) if v in P.faces[f]]
    order = [faces[0]]
    while len(order) < len(faces):
        f = P.faces[order[-1]]
        trail = f[f.index(v) - 1]
        order.append(next(g for g in faces if P.faces[g][(P.faces[g].index(v) + 1) % len(P.faces[g])] == trail))
    return order


def direction_key(P, v, face, target, order):
    f = P.faces[face]
    i = f.index(v)
    V = P.vertices
    lead, trail = V[f[(i + 1) % len(f)]] - V[v], V[f[i - 1]] - V[v]
    n = np.cross(lead, trail)
    d = target - V[v]
    ang = math.atan2(n @ np.cross(lead, d) / np.linalg.norm(n), lead @ d)
    full = math.acos(lead @ trail / np.linalg.norm(lead) / np.linalg.norm(trail))
    rank = order.index(face)
    if ang > full - 1e-9:
        rank, ang = (rank + 1) % len(order), 0.0
    return rank, round(ang, 9)


def oracle_interleaved(P, T1, T2):
    out = []
    for v in range(P.n_vertices):
        order = star_faces(P, v)
        around = []
        for label, T in ((1, T1), (2, T2)):
            for s in T.segments:
                for a, b in ((s.p, s.q), (s.q, s.p)):
                    if a.kind == "vertex" and a.ref == v:
                        around.append((direction_key(P, v, s.carrier, to3d(P, b), order), label))
        labels = [lab for _, lab in sorted(around)]
        if sum(labels[i] != labels[i - 1] for i in range(len(labels))) > 2:
            out.append(v)
    return out


PAIRS = [n for n in ALL_POSITIVE + NEGATIVE if n != "cube_nonspanning"]


@pytest.mark.parametrize("name", PAIRS)
def test_noncrossing_matches_3d_oracle(name):
    P, A, B = load_case(name)
    rep = check_noncrossing(P, A, B)
    crosses, inter = oracle_crossings(P, A, B), oracle_interleaved(P, A, B)
    assert rep.ok == (not crosses and not inter)
    kinds = {v["kind"] for v in rep.violations}
    assert ("proper-cross" in kinds) == bool(crosses)
    assert ("interleaved-at-vertex" in kinds) == bool(inter)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_noncrossing_on_random_solids(seed):
    _, (P, a, b) = samples.random_case(np.random.default_rng(seed))
    A, B = tree_from_dict(P, a), tree_from_dict(P, b)
    assert check_noncrossing(P, A, B).ok
    assert not oracle_crossings(P, A, B) and not oracle_interleaved(P, A, B)


@pytest.mark.parametrize("name", ALL_POSITIVE + NEGATIVE)
def test_symmetric_and_deterministic(name):
    P, A, B = load_case(name)
    r1, r2 = check_noncrossing(P, A, B), check_noncrossing(P, B, A)
    assert r1.ok == r2.ok
    assert sorted(v["kind"] for v in r1.violations) == sorted(v["kind"] for v in r2.violations)
    assert json.dumps(r1.to_json(P)) == json.dumps(check_noncrossing(P, A, B).to_json(P))


def cube_tree(edges):
    return samples.tree_dict(8, edges)


def failures(P, edges):
    return {f["kind"] for f in validate_tree(P, tree_from_dict(P, cube_tree(edges))).failures}


def test_validate_tree_examples():
    P = load_case("cube")[0]
    assert failures(P, [(0, 1), (1, 2), (2, 3), (3, 7), (7, 6), (6, 5), (5, 4)]) == set()
    assert "not-connected" in failures(P, [(0, 4), (1, 5), (2, 6), (3, 7), (5, 6), (6, 7)])
    assert "not-acyclic" in failures(P, [(0, 1), (1, 2), (2, 3), (3, 7), (7, 6), (6, 5), (5, 4), (4, 0)])


def test_validate_reports_missing_vertex():
    P = load_case("cube")[0]
    data = cube_tree([(0, 1), (1, 2), (2, 3), (3, 7), (7, 6), (6, 5)])
    data["nodes"] = [n for n in data["nodes"] if n["id"] != "v4"]
    assert "not-spanning" in {f["kind"] for f in validate_tree(P, tree_from_dict(P, data)).failures}


@pytest.mark.parametrize("data", [
    {"nodes": []},
    {"nodes": [{"id": "a", "anchor": {"kind": "vertex", "ref": 99}}], "edges": []},
    {"nodes": [{"id": "a", "anchor": {"kind": "blob", "ref": 0}}], "edges": []},
    {"nodes": [{"id": "a", "anchor": {"kind": "vertex", "ref": 0}}], "edges": [{"from": "a", "to": "zz"}]},
])
def test_bad_tree_json_is_format_error(data):
    P = load_case("cube")[0]
    with pytest.raises(FormatError):
        tree_from_dict(P, data)


def test_identical_trees_are_rejected():
    P, A, _ = load_case("cube")
    rep = check_noncrossing(P, A, A)
    assert not rep.ok
