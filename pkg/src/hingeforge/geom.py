"""Planar primitives, tolerance-aware predicates and the shared tolerance policy.

Counterclockwise is the canonical orientation throughout the package.
Points are plain ``(x, y)`` tuples of floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateSegmentError, NonSimplePolygonError

TWO_PI = 2.0 * math.pi

NEGATIVE, ZERO, POSITIVE = -1, 0, 1

DISJOINT = "disjoint"
SHARED_ENDPOINT = "shared-endpoint"
PROPER_CROSS = "proper-cross"
TOUCH_INTERIOR = "touch-interior"
OVERLAP = "overlap"


@dataclass(frozen=True)
class Tolerance:
    """Single numeric policy for every equality and incidence decision.

    ``absolute_eps`` is a length; loaders scale the relative default by the
    bounding-box diagonal of the input.
    """

    absolute_eps: float = 1e-9
    angle_eps: float = 1e-9

    def __post_init__(self):
        if not (self.absolute_eps > 0 and self.angle_eps > 0):
            raise ValueError("tolerances must be positive")

    @classmethod
    def for_scale(cls, diagonal, relative_eps=1e-9, angle_eps=1e-9):
        return cls(absolute_eps=relative_eps * max(diagonal, 1e-300), angle_eps=angle_eps)


DEFAULT_TOL = Tolerance()


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def scale(p, s):
    return (p[0] * s, p[1] * s)


def dot(p, q):
    return p[0] * q[0] + p[1] * q[1]


def cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def norm(p):
    return math.hypot(p[0], p[1])


def dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def lerp(p, q, t):
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def rotate(v, theta):
    c, s = math.cos(theta), math.sin(theta)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def unit(v):
    n = norm(v)
    return (v[0] / n, v[1] / n)


def same_point(p, q, tol=DEFAULT_TOL):
    return dist(p, q) <= tol.absolute_eps


@dataclass(frozen=True)
class Rigid:
    """Orientation-preserving planar isometry ``x -> R(theta) x + t``."""

    theta: float = 0.0
    tx: float = 0.0
    ty: float = 0.0

    def apply(self, p):
        c, s = math.cos(self.theta), math.sin(self.theta)
        return (c * p[0] - s * p[1] + self.tx, s * p[0] + c * p[1] + self.ty)

    def apply_vector(self, v):
        return rotate(v, self.theta)

    def compose(self, other: "Rigid") -> "Rigid":
        """``self ∘ other`` (apply ``other`` first)."""
        t = self.apply((other.tx, other.ty))
        return Rigid(_wrap_angle(self.theta + other.theta), t[0], t[1])

    def inverse(self) -> "Rigid":
        t = rotate((-self.tx, -self.ty), -self.theta)
        return Rigid(_wrap_angle(-self.theta), t[0], t[1])

    @classmethod
    def align(cls, a, b, A, B) -> "Rigid":
        """Rigid motion sending ``a`` to ``A`` and direction ``a->b`` onto ``A->B``."""
        theta = math.atan2(B[1] - A[1], B[0] - A[0]) - math.atan2(b[1] - a[1], b[0] - a[0])
        theta = _wrap_angle(theta)
        ra = rotate(a, theta)
        return cls(theta, A[0] - ra[0], A[1] - ra[1])


def _wrap_angle(theta):
    """Map an angle to (-pi, pi]."""
    theta = math.fmod(theta, TWO_PI)
    if theta <= -math.pi:
        theta += TWO_PI
    elif theta > math.pi:
        theta -= TWO_PI
    return theta


def orient2d(p, q, r, tol=DEFAULT_TOL):
    """Sign of the signed area of triangle pqr.

    ZERO when the point farthest from the longest side lies within
    ``tol.absolute_eps`` of that side's line.
    """
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    longest = max(dist(p, q), dist(q, r), dist(r, p))
    if longest == 0.0 or abs(det) / longest <= tol.absolute_eps:
        return ZERO
    return POSITIVE if det > 0 else NEGATIVE


def point_segment_distance(p, a, b):
    ab = sub(b, a)
    L2 = dot(ab, ab)
    if L2 == 0.0:
        return dist(p, a)
    t = max(0.0, min(1.0, dot(sub(p, a), ab) / L2))
    return dist(p, lerp(a, b, t))


def segment_param(p, a, b):
    """Parameter of the orthogonal projection of ``p`` on line ``ab``."""
    ab = sub(b, a)
    return dot(sub(p, a), ab) / dot(ab, ab)


def on_segment(p, a, b, tol=DEFAULT_TOL):
    return point_segment_distance(p, a, b) <= tol.absolute_eps


def segment_classify(s1, s2, tol=DEFAULT_TOL):
    """Classify how two closed segments meet.

    Returns one of ``disjoint``, ``shared-endpoint`` (a single common point that
    is an endpoint of both), ``proper-cross``, ``touch-interior`` (a single
    common point interior to at least one segment) or ``overlap`` (collinear
    with a common sub-segment of positive length).
    """
    (a, b), (c, d) = s1, s2
    eps = tol.absolute_eps
    if dist(a, b) <= eps or dist(c, d) <= eps:
        raise DegenerateSegmentError("zero-length segment")

    o1, o2 = orient2d(a, b, c, tol), orient2d(a, b, d, tol)
    o3, o4 = orient2d(c, d, a, tol), orient2d(c, d, b, tol)

    if o1 == o2 == ZERO or o3 == o4 == ZERO:
        # collinear: compare extents along s1
        L = dist(a, b)
        u = unit(sub(b, a))
        tc, td = dot(sub(c, a), u), dot(sub(d, a), u)
        lo, hi = max(0.0, min(tc, td)), min(L, max(tc, td))
        if hi - lo > eps:
            return OVERLAP
        if hi - lo < -eps:
            return DISJOINT
        return _classify_touch(s1, s2, tol)

    if o1 * o2 < 0 and o3 * o4 < 0:
        return PROPER_CROSS
    if (o1 == o2 and o1 != ZERO) or (o3 == o4 and o3 != ZERO):
        return DISJOINT
    return _classify_touch(s1, s2, tol)


def _classify_touch(s1, s2, tol):
    (a, b), (c, d) = s1, s2
    hits = []
    for p in (a, b):
        if on_segment(p, c, d, tol):
            hits.append(p)
    for p in (c, d):
        if on_segment(p, a, b, tol):
            hits.append(p)
    if not hits:
        return DISJOINT
    p = hits[0]
    end1 = same_point(p, a, tol) or same_point(p, b, tol)
    end2 = same_point(p, c, tol) or same_point(p, d, tol)
    return SHARED_ENDPOINT if (end1 and end2) else TOUCH_INTERIOR


def intersection_point(s1, s2, tol=DEFAULT_TOL):
    """A representative common point of two intersecting segments, or None."""
    (a, b), (c, d) = s1, s2
    for p in (a, b):
        if on_segment(p, c, d, tol):
            return p
    for p in (c, d):
        if on_segment(p, a, b, tol):
            return p
    r, s = sub(b, a), sub(d, c)
    den = cross(r, s)
    if den == 0.0:
        return None
    t = cross(sub(c, a), s) / den
    u = cross(sub(c, a), r) / den
    if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
        return lerp(a, b, t)
    return None


def segment_distance(s1, s2):
    (a, b), (c, d) = s1, s2
    if intersection_point(s1, s2) is not None:
        return 0.0
    return min(point_segment_distance(a, c, d), point_segment_distance(b, c, d),
               point_segment_distance(c, a, b), point_segment_distance(d, a, b))


def ccw_angle(at, from_dir, to_dir, tol=DEFAULT_TOL):
    """Counterclockwise angle swept from ray at->from_dir to ray at->to_dir.

    Result lies in [0, 2*pi); coincident rays give 0.
    """
    a1 = math.atan2(from_dir[1] - at[1], from_dir[0] - at[0])
    a2 = math.atan2(to_dir[1] - at[1], to_dir[0] - at[0])
    ang = (a2 - a1) % TWO_PI
    if ang < tol.angle_eps or TWO_PI - ang < tol.angle_eps:
        return 0.0
    return ang


def signed_area(points: Sequence) -> float:
    s = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def perimeter(points: Sequence) -> float:
    n = len(points)
    return sum(dist(points[i], points[(i + 1) % n]) for i in range(n))


def simplicity_defects(points: Sequence, tol=DEFAULT_TOL):
    """Index pairs of boundary segments that meet where they should not."""
    n = len(points)
    segs = [(points[i], points[(i + 1) % n]) for i in range(n)]
    bad = []
    for i in range(n):
        if dist(*segs[i]) <= tol.absolute_eps:
            bad.append((i, i))
    if bad:
        return bad
    for i in range(n):
        for j in range(i + 1, n):
            kind = segment_classify(segs[i], segs[j], tol)
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # only the common vertex may be shared; a fold-back is an overlap
                if kind != SHARED_ENDPOINT:
                    bad.append((i, j))
            elif kind != DISJOINT:
                bad.append((i, j))
    return bad


def is_simple(points: Sequence, tol=DEFAULT_TOL) -> bool:
    return len(points) >= 3 and not simplicity_defects(points, tol)


@dataclass(frozen=True)
class PlanarPolygon:
    """Simple polygon with counterclockwise vertices."""

    vertices: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", pts)

    @classmethod
    def checked(cls, vertices, tol=DEFAULT_TOL) -> "PlanarPolygon":
        poly = cls(tuple(vertices))
        if not is_simple(poly.vertices, tol):
            raise NonSimplePolygonError("polygon is not simple")
        if signed_area(poly.vertices) <= 0:
            raise NonSimplePolygonError("polygon is not counterclockwise")
        return poly

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def transformed(self, rigid: Rigid) -> "PlanarPolygon":
        return PlanarPolygon(tuple(rigid.apply(p) for p in self.vertices))

    @property
    def area(self):
        return signed_area(self.vertices)

    @property
    def perimeter(self):
        return perimeter(self.vertices)


def _points(p):
    return p.vertices if isinstance(p, PlanarPolygon) else tuple(p)


def polygon_area(p, tol=DEFAULT_TOL) -> float:
    """Positive shoelace area of a simple polygon; raises on non-simple input."""
    pts = _points(p)
    if not is_simple(pts, tol):
        raise NonSimplePolygonError("polygon is not simple")
    return abs(signed_area(pts))


def point_in_polygon(pt, poly, tol=DEFAULT_TOL) -> int:
    """+1 strictly inside, 0 on the boundary (within tolerance), -1 outside."""
    pts = _points(poly)
    n = len(pts)
    for i in range(n):
        if on_segment(pt, pts[i], pts[(i + 1) % n], tol):
            return 0
    inside = False
    x, y = pt
    for i in range(n):
        (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xc > x:
                inside = not inside
    return 1 if inside else -1


def _ccw(pts):
    return pts if signed_area(pts) >= 0 else pts[::-1]


def _inside_samples(pp, qq, tol):
    """Points just inside ``pp`` next to each stretch of its boundary, the
    boundary being split wherever a vertex of ``qq`` lies on it."""
    n = len(pp)
    size = max(perimeter(pp), perimeter(qq))
    for i in range(n):
        a, b = pp[i], pp[(i + 1) % n]
        L = dist(a, b)
        ts = {0.0, 1.0}
        for c in qq:
            if point_segment_distance(c, a, b) <= tol.absolute_eps:
                ts.add(min(max(segment_param(c, a, b), 0.0), 1.0))
        ts = sorted(ts)
        inward = rotate(unit(sub(b, a)), math.pi / 2)
        for t0, t1 in zip(ts, ts[1:]):
            span = (t1 - t0) * L
            if span <= tol.absolute_eps:
                continue
            delta = max(min(span / 4, 1e-6 * size), 10 * tol.absolute_eps)
            yield add(lerp(a, b, 0.5 * (t0 + t1)), scale(inward, delta))


def polygons_overlap(p, q, tol=DEFAULT_TOL) -> bool:
    """True iff the interiors of two simple polygons intersect.

    Shared boundary alone does not count. Decided with the orientation
    predicates: a proper crossing of the boundaries means overlap; otherwise
    the interiors meet iff a point just inside one boundary, next to some
    stretch of it, lies strictly inside the other polygon.
    """
    pp, qq = _ccw(list(_points(p))), _ccw(list(_points(q)))
    n, m = len(pp), len(qq)
    for i in range(n):
        e = (pp[i], pp[(i + 1) % n])
        for j in range(m):
            if segment_classify(e, (qq[j], qq[(j + 1) % m]), tol) == PROPER_CROSS:
                return True
    for a, b in ((pp, qq), (qq, pp)):
        for x in _inside_samples(a, b, tol):
            if point_in_polygon(x, b, tol) == 1:
                return True
    return False


def polygon_boundary_distance(pt, poly):
    pts = _points(poly)
    n = len(pts)
    return min(point_segment_distance(pt, pts[i], pts[(i + 1) % n]) for i in range(n))
