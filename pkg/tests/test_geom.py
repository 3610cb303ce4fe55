import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from hingeforge import geom

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


def test_orient2d_examples():
    assert geom.orient2d((0, 0), (1, 0), (0, 1)) == geom.POSITIVE
    assert geom.orient2d((0, 0), (1, 0), (2, 0)) == geom.ZERO
    assert geom.orient2d((0, 0), (0, 1), (1, 0)) == geom.NEGATIVE


@given(point, point, point)
def test_orient2d_antisymmetric(p, q, r):
    assert geom.orient2d(p, q, r) == -geom.orient2d(q, p, r)
    assert geom.orient2d(p, q, r) == geom.orient2d(q, r, p)


@pytest.mark.parametrize("s1, s2, kind", [
    (((0, 0), (1, 0)), ((1, 0), (1, 1)), geom.SHARED_ENDPOINT),
    (((0, 0), (2, 2)), ((0, 2), (2, 0)), geom.PROPER_CROSS),
    (((0, 0), (2, 0)), ((1, 0), (1, 1)), geom.TOUCH_INTERIOR),
    (((0, 0), (2, 0)), ((1, 0), (3, 0)), geom.OVERLAP),
    (((0, 0), (1, 0)), ((0, 1), (1, 1)), geom.DISJOINT),
])
def test_segment_classify(s1, s2, kind):
    assert geom.segment_classify(s1, s2) == kind
    assert geom.segment_classify(s2, s1) == kind


def test_ccw_angle_examples():
    assert math.isclose(geom.ccw_angle((0, 0), (1, 0), (0, 1)), math.pi / 2)
    assert geom.ccw_angle((0, 0), (1, 0), (1, 0)) == 0.0
    assert math.isclose(geom.ccw_angle((0, 0), (1, 0), (0, -1)), 3 * math.pi / 2)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_ccw_angle_complement(a, b):
    u, v = (math.cos(a), math.sin(a)), (math.cos(b), math.sin(b))
    x, y = geom.ccw_angle((0, 0), u, v), geom.ccw_angle((0, 0), v, u)
    assert 0 <= x < geom.TWO_PI
    assert x == y == 0.0 or math.isclose(x + y, geom.TWO_PI, abs_tol=1e-9)


def test_polygon_area_examples():
    assert geom.polygon_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == pytest.approx(1.0)
    assert geom.polygon_area([(0, 0), (1, 0), (0, 1)]) == pytest.approx(0.5)
    hexagon = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]
    assert geom.polygon_area(hexagon) == pytest.approx(3 * math.sqrt(3) / 2, rel=1e-12)


def test_is_simple():
    assert geom.is_simple([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert not geom.is_simple([(0, 0), (1, 1), (1, 0), (0, 1)])


@given(st.floats(-math.pi, math.pi), coord, coord, st.floats(-math.pi, math.pi), coord, coord, point)
def test_rigid_compose_inverse(t1, x1, y1, t2, x2, y2, p):
    A, B = geom.Rigid(t1, x1, y1), geom.Rigid(t2, x2, y2)
    q = A.compose(B).apply(p)
    r = A.apply(B.apply(p))
    assert math.dist(q, r) < 1e-9
    assert math.dist(A.inverse().apply(A.apply(p)), p) < 1e-9


@given(point, point, point, st.floats(-math.pi, math.pi), coord, coord)
def test_rigid_align(a, b, c, t, x, y):
    assume(math.dist(a, b) > 1e-3)
    M = geom.Rigid(t, x, y)
    R = geom.Rigid.align(a, b, M.apply(a), M.apply(b))
    assert math.dist(R.apply(c), M.apply(c)) < 1e-8


SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def shifted(poly, dx, dy=0.0):
    return [(x + dx, y + dy) for x, y in poly]


def test_overlap_examples():
    assert not geom.polygons_overlap(SQUARE, shifted(SQUARE, 2))
    assert geom.polygons_overlap(SQUARE, shifted(SQUARE, 0.5))
    assert not geom.polygons_overlap(SQUARE, shifted(SQUARE, 1))
    assert geom.polygons_overlap(SQUARE, SQUARE)
    assert geom.polygons_overlap(SQUARE, [(0.2, 0.2), (0.4, 0.2), (0.3, 0.4)])
    # triangle inside the square sharing its bottom edge
    assert geom.polygons_overlap(SQUARE, [(0, 0), (1, 0), (0.5, 0.5)])


def test_overlap_edge_sharing_triangles_with_rounding_noise():
    # two triangles sharing an edge whose endpoints differ in the last bit;
    # a boolean-area library reported a full-triangle intersection here
    a = [(1.6332491566603204, -2.7505834339694077), (5.355087860504056, 1.2343420467920858),
         (3.1327773821979283, 1.1102230246251565e-15)]
    b = [(1.6332491566603204, -2.7505834339694077), (6.069850902109531, -0.681603883341154),
         (5.355087860504056, 1.2343420467920856)]
    assert not geom.polygons_overlap(a, b)
    assert not geom.polygons_overlap(b, a)


def clip(subject, clipper):
    """Sutherland-Hodgman clipping of a polygon by a convex CCW polygon."""
    out = list(subject)
    m = len(clipper)
    for i in range(m):
        a, b = clipper[i], clipper[(i + 1) % m]
        inside = lambda p: (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0
        src, out = out, []
        for j in range(len(src)):
            p, q = src[j - 1], src[j]
            if inside(q):
                if not inside(p):
                    out.append(_cut(p, q, a, b))
                out.append(q)
            elif inside(p):
                out.append(_cut(p, q, a, b))
        if not out:
            return []
    return out


def _cut(p, q, a, b):
    d1 = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    d2 = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
    t = d1 / (d1 - d2)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


@st.composite
def convex_polygons(draw):
    n = draw(st.integers(3, 6))
    gaps = draw(st.lists(st.floats(1.0, 1.8), min_size=n, max_size=n))
    start = draw(st.floats(0, 2 * math.pi))
    r = draw(st.floats(0.3, 2))
    cx, cy = draw(st.floats(-1.5, 1.5)), draw(st.floats(-1.5, 1.5))
    total, acc, out = sum(gaps), start, []
    for g in gaps:
        out.append((cx + r * math.cos(acc), cy + r * math.sin(acc)))
        acc += 2 * math.pi * g / total
    return out


@settings(max_examples=300)
@given(convex_polygons(), convex_polygons())
def test_overlap_matches_clipping_oracle(p, q):
    piece = clip(p, q)
    area = abs(geom.signed_area(piece)) if piece else 0.0
    assume(area > 1e-6 or area < 1e-12)
    assert geom.polygons_overlap(p, q) == (area > 1e-6)


def reflect(poly, a, b):
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L = dx * dx + dy * dy
    out = []
    for x, y in poly:
        t = ((x - ax) * dx + (y - ay) * dy) / L
        fx, fy = ax + t * dx, ay + t * dy
        out.append((2 * fx - x, 2 * fy - y))
    return out[::-1]


@given(convex_polygons(), st.integers(0, 5))
def test_mirror_across_edge_never_overlaps(p, k):
    k %= len(p)
    q = reflect(p, p[k], p[(k + 1) % len(p)])
    assert not geom.polygons_overlap(p, q)
    assert geom.polygons_overlap(p, p)
