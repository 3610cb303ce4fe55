"""Polyhedral surfaces, points drawn on them, cone angles and developments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geom
from .errors import DomainError, FormatError, MeshError
from .geom import TWO_PI, Rigid, Tolerance

VERTEX, EDGE, FACE = "vertex", "edge", "face"


@dataclass(frozen=True)
class SurfacePoint:
    """A point on the surface in canonical form.

    vertex: ``ref`` is the vertex id.
    edge:   ``ref`` is the edge id, ``params == (t,)`` with 0 < t < 1 measured
            from the lower-numbered endpoint.
    face:   ``ref`` is the face id, ``params`` are barycentric weights over the
            face's vertices, nonzero only on one triangle of the fan from the
            face's first vertex.
    """

    kind: str
    ref: int
    params: tuple = ()

    def to_json(self, P: "Polyhedron" = None):
        if self.kind == VERTEX:
            return {"kind": VERTEX, "ref": self.ref}
        if self.kind == EDGE:
            ref = list(P.edges[self.ref]) if P is not None else self.ref
            return {"kind": EDGE, "ref": ref, "params": [self.params[0]]}
        return {"kind": FACE, "ref": self.ref, "params": list(self.params)}


@dataclass(frozen=True)
class SurfacePolyline:
    """Consecutive points share the carrier face stored for their segment.

    For a closed polyline the last carrier belongs to the closing segment.
    """

    points: tuple
    carriers: tuple
    closed: bool = False

    def segments(self):
        n = len(self.points)
        m = n if self.closed else n - 1
        for i in range(m):
            yield self.points[i], self.points[(i + 1) % n], self.carriers[i]

    def length(self, P: "Polyhedron") -> float:
        return sum(geom.dist(P.chart_point(a, f), P.chart_point(b, f))
                   for a, b, f in self.segments())


@dataclass(frozen=True)
class StarEntry:
    face: int
    corner: int
    start: float
    angle: float


@dataclass
class ConeAngleTable:
    angles: dict = field(default_factory=dict)

    @classmethod
    def of(cls, P: "Polyhedron") -> "ConeAngleTable":
        return cls({v: P.cone_angle(v) for v in range(P.n_vertices)})

    def total_defect(self):
        return sum(TWO_PI - a for a in self.angles.values())


def _newell_normal(pts):
    n = np.zeros(3)
    k = len(pts)
    for i in range(k):
        a, b = pts[i], pts[(i + 1) % k]
        n[0] += (a[1] - b[1]) * (a[2] + b[2])
        n[1] += (a[2] - b[2]) * (a[0] + b[0])
        n[2] += (a[0] - b[0]) * (a[1] + b[1])
    return n


class Polyhedron:
    """Closed orientable polyhedral surface of genus 0 with convex planar faces.

    Faces are vertex cycles, counterclockwise seen from outside. Each face gets
    an isometric 2D chart in which its vertices run counterclockwise. Edges are
    unordered vertex pairs; doubly covered polygons are two mirror faces sharing
    every edge.
    """

    def __init__(self, vertices, faces, relative_eps=1e-9, angle_eps=1e-9):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        self.faces = [tuple(int(i) for i in f) for f in faces]
        n = len(self.vertices)
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        self.tol = Tolerance.for_scale(float(np.linalg.norm(hi - lo)), relative_eps, angle_eps)
        self._check_combinatorics(n)
        self._build_charts()
        self._build_stars()

    # construction ---------------------------------------------------------

    def _check_combinatorics(self, n):
        used = set()
        self.halfedge_face = {}
        for fi, f in enumerate(self.faces):
            if len(f) < 3 or len(set(f)) != len(f):
                raise MeshError(f"face {fi} is degenerate", "degenerate-face", face=fi)
            for v in f:
                if not 0 <= v < n:
                    raise FormatError(f"face {fi} references missing vertex {v}")
                used.add(v)
            for i in range(len(f)):
                he = (f[i], f[(i + 1) % len(f)])
                if he in self.halfedge_face:
                    raise MeshError(f"half-edge {he} used twice", "non-manifold", halfedge=he)
                self.halfedge_face[he] = fi
        if len(used) != n:
            missing = sorted(set(range(n)) - used)
            raise MeshError(f"vertices {missing} belong to no face", "unused-vertex")
        for a, b in self.halfedge_face:
            if (b, a) not in self.halfedge_face:
                raise MeshError(f"edge {(a, b)} borders one face", "open-boundary", edge=(a, b))
        self.edges = sorted({(min(a, b), max(a, b)) for a, b in self.halfedge_face})
        self.edge_index = {}
        for e, (a, b) in enumerate(self.edges):
            self.edge_index[(a, b)] = e
            self.edge_index[(b, a)] = e
        self.face_pos = [{v: i for i, v in enumerate(f)} for f in self.faces]
        chi = n - len(self.edges) + len(self.faces)
        if chi != 2:
            raise MeshError(f"V - E + F = {chi}, expected 2", "euler", chi=chi)

    def _build_charts(self):
        self.charts = []
        eps = self.tol.absolute_eps
        for fi, f in enumerate(self.faces):
            pts = self.vertices[list(f)]
            nrm = _newell_normal(pts)
            ln = np.linalg.norm(nrm)
            if ln <= eps * eps:
                raise MeshError(f"face {fi} has zero area", "degenerate-face", face=fi)
            nrm = nrm / ln
            centroid = pts.mean(axis=0)
            dev = np.abs((pts - centroid) @ nrm).max()
            if dev > eps:
                raise MeshError(f"face {fi} is not planar (deviation {dev:.3g})",
                                "non-planar-face", face=fi)
            e1 = pts[1] - pts[0]
            e1 = e1 - (e1 @ nrm) * nrm
            e1 = e1 / np.linalg.norm(e1)
            e2 = np.cross(nrm, e1)
            rel = pts - pts[0]
            chart = [(float(r @ e1), float(r @ e2)) for r in rel]
            k = len(chart)
            for i in range(k):
                if geom.orient2d(chart[i - 1], chart[i], chart[(i + 1) % k], self.tol) != geom.POSITIVE:
                    raise MeshError(f"face {fi} is not strictly convex at corner {i}",
                                    "non-convex-face", face=fi)
            self.charts.append(chart)

    def _build_stars(self):
        faces_at = [[] for _ in range(self.n_vertices)]
        for fi, f in enumerate(self.faces):
            for v in f:
                faces_at[v].append(fi)
        self.stars = []
        for v in range(self.n_vertices):
            first = min(faces_at[v])
            entries, f, start = [], first, 0.0
            while True:
                i = self.face_pos[f][v]
                k = len(self.faces[f])
                c = self.charts[f]
                ang = geom.ccw_angle(c[i], c[(i + 1) % k], c[i - 1], self.tol)
                entries.append(StarEntry(f, i, start, ang))
                start += ang
                prev = self.faces[f][i - 1]
                f = self.halfedge_face[(v, prev)]
                if f == first:
                    break
                if len(entries) > len(faces_at[v]):
                    break
            if len(entries) != len(faces_at[v]):
                raise MeshError(f"vertex {v} has a non-manifold star", "non-manifold", vertex=v)
            self.stars.append(entries)
        self._star_of = [{e.face: e for e in s} for s in self.stars]

    # basic queries ----------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.vertices)

    def edge_faces(self, e):
        a, b = self.edges[e]
        return self.halfedge_face[(a, b)], self.halfedge_face[(b, a)]

    def edge_length(self, e):
        a, b = self.edges[e]
        return float(np.linalg.norm(self.vertices[a] - self.vertices[b]))

    def face_area(self, f):
        return geom.signed_area(self.charts[f])

    def surface_area(self):
        return sum(self.face_area(f) for f in range(len(self.faces)))

    def cone_angle(self, v):
        return sum(e.angle for e in self.stars[v])

    def star(self, v):
        return self.stars[v]

    def face_edges(self, f):
        fv = self.faces[f]
        return [self.edge_index[(fv[i], fv[(i + 1) % len(fv)])] for i in range(len(fv))]

    # surface points ---------------------------------------------------------

    def vertex_point(self, v) -> SurfacePoint:
        if not 0 <= v < self.n_vertices:
            raise FormatError(f"no vertex {v}")
        return SurfacePoint(VERTEX, int(v))

    def edge_point(self, u, v, t) -> SurfacePoint:
        if (u, v) not in self.edge_index:
            raise FormatError(f"no edge {(u, v)}")
        e = self.edge_index[(u, v)]
        if u > v:
            u, v, t = v, u, 1.0 - t
        if not -1e-15 <= t <= 1 + 1e-15:
            raise FormatError(f"edge parameter {t} outside [0, 1]")
        slack = self.tol.absolute_eps / self.edge_length(e)
        if t <= slack:
            return SurfacePoint(VERTEX, u)
        if t >= 1 - slack:
            return SurfacePoint(VERTEX, v)
        return SurfacePoint(EDGE, e, (float(t),))

    def face_point(self, f, weights) -> SurfacePoint:
        if not 0 <= f < len(self.faces):
            raise FormatError(f"no face {f}")
        fv = self.faces[f]
        if len(weights) != len(fv):
            raise FormatError(f"face {f} needs {len(fv)} barycentric weights")
        w = [float(x) for x in weights]
        if min(w) < -1e-12 or abs(sum(w) - 1.0) > 1e-9:
            raise FormatError("barycentric weights must be nonnegative and sum to 1")
        c = self.charts[f]
        xy = (sum(wi * p[0] for wi, p in zip(w, c)), sum(wi * p[1] for wi, p in zip(w, c)))
        return self.point_from_chart(f, xy)

    def point_from_chart(self, f, xy) -> SurfacePoint:
        """Canonical SurfacePoint for chart coordinates ``xy`` of face ``f``."""
        c = self.charts[f]
        fv = self.faces[f]
        k = len(fv)
        eps = self.tol.absolute_eps
        for i in range(k):
            if geom.dist(xy, c[i]) <= eps:
                return SurfacePoint(VERTEX, fv[i])
        for i in range(k):
            a, b = c[i], c[(i + 1) % k]
            if geom.point_segment_distance(xy, a, b) <= eps:
                t = min(max(geom.segment_param(xy, a, b), 0.0), 1.0)
                return self.edge_point(fv[i], fv[(i + 1) % k], t)
        if geom.point_in_polygon(xy, c, self.tol) != 1:
            raise DomainError(f"point {xy} lies outside face {f}", stage="surface")
        for j in range(1, k - 1):
            lam = _barycentric(xy, c[0], c[j], c[j + 1])
            if min(lam) >= -1e-12:
                w = [0.0] * k
                w[0], w[j], w[j + 1] = lam
                return SurfacePoint(FACE, f, tuple(w))
        raise DomainError(f"point {xy} not located in face {f}", stage="surface")

    def faces_of_point(self, p: SurfacePoint):
        if p.kind == VERTEX:
            return sorted(e.face for e in self.stars[p.ref])
        if p.kind == EDGE:
            return sorted(self.edge_faces(p.ref))
        return [p.ref]

    def chart_point(self, p: SurfacePoint, f):
        """Coordinates of ``p`` in the chart of face ``f``."""
        c = self.charts[f]
        if p.kind == VERTEX:
            i = self.face_pos[f].get(p.ref)
            if i is None:
                raise DomainError(f"vertex {p.ref} not on face {f}", stage="surface")
            return c[i]
        if p.kind == EDGE:
            a, b = self.edges[p.ref]
            pos = self.face_pos[f]
            if a not in pos or b not in pos:
                raise DomainError(f"edge {p.ref} not on face {f}", stage="surface")
            return geom.lerp(c[pos[a]], c[pos[b]], p.params[0])
        if p.ref != f:
            raise DomainError(f"face point of face {p.ref} used in face {f}", stage="surface")
        w = p.params
        return (sum(wi * q[0] for wi, q in zip(w, c)), sum(wi * q[1] for wi, q in zip(w, c)))

    def on_common_edge(self, p: SurfacePoint, q: SurfacePoint):
        """Edge id if both points lie on the closure of one mesh edge, else None."""
        def edges_of(s):
            if s.kind == VERTEX:
                return {self.edge_index[(s.ref, w)] for w in self._neighbors(s.ref)}
            if s.kind == EDGE:
                return {s.ref}
            return set()
        common = edges_of(p) & edges_of(q)
        if p.kind == EDGE and q.kind == EDGE and p.ref != q.ref:
            return None
        return min(common) if common else None

    def _neighbors(self, v):
        return [self.faces[e.face][(e.corner + 1) % len(self.faces[e.face])] for e in self.stars[v]]

    # intrinsic angles ---------------------------------------------------------

    def polar_angle(self, v, f, direction):
        """Angle of a tangent direction at vertex ``v``, measured counterclockwise
        around the developed star from the first star face's leading edge."""
        entry = self._star_of[v].get(f)
        if entry is None:
            raise DomainError(f"direction not anchored at vertex {v}: face {f} not incident",
                              stage="surface")
        c = self.charts[f]
        k = len(c)
        at = c[entry.corner]
        lead = c[(entry.corner + 1) % k]
        tip = geom.add(at, direction)
        ang = geom.ccw_angle(at, lead, tip, self.tol)
        if ang > entry.angle + self.tol.angle_eps:
            # allow a direction exactly along the trailing edge to read as 0 of the next face
            if TWO_PI - ang <= self.tol.angle_eps:
                ang = 0.0
            else:
                raise DomainError(f"direction leaves face {f} at vertex {v}", stage="surface")
        theta = entry.start + min(ang, entry.angle)
        cone = self.cone_angle(v)
        if cone - theta <= self.tol.angle_eps:
            theta = 0.0
        return theta


def _barycentric(p, a, b, c):
    det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det
    l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det
    return (1.0 - l1 - l2, l1, l2)


# ---------------------------------------------------------------------------
# mesh text


def parse_off(text: str):
    """Parse OFF text into (vertices, faces). Raises FormatError."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines or not lines[0][0].upper().endswith("OFF"):
        raise FormatError("missing OFF header")
    head = lines[0][1:]
    rest = lines[1:]
    if not head:
        if not rest:
            raise FormatError("missing counts line")
        head, rest = rest[0], rest[1:]
    try:
        nv, nf = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise FormatError("bad counts line") from None
    if nv < 0 or nf < 0 or len(rest) < nv + nf:
        raise FormatError("truncated OFF body")
    try:
        verts = [[float(x) for x in rest[i][:3]] for i in range(nv)]
    except ValueError:
        raise FormatError("bad vertex coordinate") from None
    if any(len(v) != 3 or not all(math.isfinite(x) for x in v) for v in verts):
        raise FormatError("vertex lines need three finite coordinates")
    faces = []
    for i in range(nf):
        row = rest[nv + i]
        try:
            k = int(row[0])
            idx = [int(x) for x in row[1:1 + k]]
        except ValueError:
            raise FormatError(f"bad face line {i}") from None
        if len(idx) != k:
            raise FormatError(f"face line {i} is short")
        faces.append(idx)
    return verts, faces


def load_polyhedron(text: str, relative_eps=1e-9, angle_eps=1e-9) -> Polyhedron:
    verts, faces = parse_off(text)
    P = Polyhedron(verts, faces, relative_eps=relative_eps, angle_eps=angle_eps)
    defect = ConeAngleTable.of(P).total_defect()
    if abs(defect - 2 * TWO_PI) > 1e-9:
        raise MeshError(f"Gauss-Bonnet defect sum {defect} != 4*pi", "euler")
    return P


def format_off(vertices, faces) -> str:
    out = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    for v in vertices:
        out.append(" ".join(repr(float(x)) for x in v))
    for f in faces:
        out.append(" ".join(str(x) for x in [len(f), *f]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# operations


def cone_angle(P: Polyhedron, v) -> float:
    return P.cone_angle(v)


def develop(P: Polyhedron, seed_face, face_walk: Sequence):
    """Unfold faces along a walk, each new face hinged onto its predecessor.

    ``face_walk`` lists the faces after ``seed_face``; an item may be a
    ``(face, edge)`` pair to pick the hinge edge when two faces share several
    edges (doubly covered polygons). Returns ``[(face, Rigid), ...]`` starting
    with the seed, mapping each face chart into the common plane.
    """
    placed = [(seed_face, Rigid())]
    prev, T_prev = seed_face, Rigid()
    for item in face_walk:
        cur, hinge = (item if isinstance(item, tuple) else (item, None))
        shared = sorted(set(P.face_edges(prev)) & set(P.face_edges(cur)))
        if not shared or cur == prev:
            raise DomainError(f"faces {prev} and {cur} are not adjacent", stage="surface")
        e = hinge if hinge is not None else shared[0]
        if e not in shared:
            raise DomainError(f"edge {e} is not shared by faces {prev} and {cur}", stage="surface")
        a, b = P.edges[e]
        pa, pb = P.charts[prev][P.face_pos[prev][a]], P.charts[prev][P.face_pos[prev][b]]
        ca, cb = P.charts[cur][P.face_pos[cur][a]], P.charts[cur][P.face_pos[cur][b]]
        T = Rigid.align(ca, cb, T_prev.apply(pa), T_prev.apply(pb))
        placed.append((cur, T))
        prev, T_prev = cur, T
    return placed


def wedge_angle(P: Polyhedron, v, dir_in, dir_out, side="left") -> float:
    """Intrinsic angle at vertex ``v`` between two tangent directions.

    Directions are ``(face, vector)`` pairs in that face's chart. ``left``
    sweeps counterclockwise from ``dir_in`` to ``dir_out``; ``right`` is the
    complementary sweep, so the two sides add up to the cone angle.
    """
    t_in = P.polar_angle(v, *dir_in)
    t_out = P.polar_angle(v, *dir_out)
    cone = P.cone_angle(v)
    left = (t_out - t_in) % cone
    if cone - left <= P.tol.angle_eps:
        left = 0.0
    if side == "left":
        return left
    if side == "right":
        return cone - left if left > 0 else 0.0
    raise ValueError("side must be 'left' or 'right'")


def surface_distance_point_segment(P: Polyhedron, p: SurfacePoint, s) -> float:
    """Distance from ``p`` to a face-local segment ``(a, b[, carrier])``,
    measured in a face chart that contains all three points."""
    a, b = s[0], s[1]
    faces = set(P.faces_of_point(p)) & set(P.faces_of_point(a)) & set(P.faces_of_point(b))
    if len(s) > 2 and s[2] is not None:
        faces &= {s[2]}
    if not faces:
        raise DomainError("point and segment share no face", stage="surface")
    return min(geom.point_segment_distance(P.chart_point(p, f), P.chart_point(a, f),
                                           P.chart_point(b, f)) for f in sorted(faces))
