"""Glue a hinged dissection back into a polyhedral metric and check it.

Piece edges are identified wherever two placed pieces share a stretch of
boundary in configuration A or in configuration B. Identified points are
tracked by arc length; vertex classes are the closure of these
identifications, and each class collects the angle of every piece corner
in it (a point in the middle of a piece edge contributes pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geom
from .dissect import HingedDissection, build_dissection, contacts, edge_lengths, hinge_angles
from .errors import GluingError, InvariantError
from .noncross import SurfaceTree
from .surface import Polyhedron


class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class VertexClass:
    corners: list               # (piece, corner index)
    edge_points: list           # (piece, edge, arc length) points strictly inside edges
    angle: float
    label: object = None        # source P-vertex id when known
    composition: tuple = None   # (alpha, 2 pi - alpha') for hinge classes


@dataclass
class GluedMetric:
    classes: list
    n_pieces: int
    n_edges: int                # glued edge pairs after refinement
    angle_eps: float = 1e-9
    pairs: list = field(default_factory=list)

    def vertices(self, flat_eps=None):
        """Classes with nonzero curvature."""
        eps = self.angle_eps if flat_eps is None else flat_eps
        return [c for c in self.classes if abs(c.angle - geom.TWO_PI) > eps]

    def euler_characteristic(self):
        return len(self.classes) - self.n_edges + self.n_pieces


def _snap(values, eps):
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > eps:
            out.append(v)
    return out


def glue_metric(D: HingedDissection, angles=None) -> GluedMetric:
    tol = D.tol
    eps = 1e2 * tol.absolute_eps
    lens = edge_lengths(D)
    links = []                  # (p, e, s0, s1, q, f, t0, t1), one per glued stretch
    for config in ("A", "B"):
        for ct in contacts(D, config, tol):
            if (ct.p, ct.e) < (ct.q, ct.f):
                links.append((ct.p, ct.e, ct.s0, ct.s1, ct.q, ct.f, ct.t0, ct.t1, config))

    # refine every edge at all breakpoints carried over by the links, to closure
    cuts = {key: {0.0, L} for key, L in lens.items()}
    for p, e, s0, s1, q, f, t0, t1, _ in links:
        cuts[(p, e)] |= {s0, s1}
        cuts[(q, f)] |= {t0, t1}
    for _ in range(4 * len(lens) + 4):
        changed = False
        for p, e, s0, s1, q, f, t0, t1, _ in links:
            for (a, b, lo, hi, c, d, u0, u1) in ((p, e, s0, s1, q, f, t0, t1), (q, f, t1, t0, p, e, s1, s0)):
                for s in list(cuts[(a, b)]):
                    if min(lo, hi) - eps < s < max(lo, hi) + eps:
                        t = u0 + (s - lo) * (u1 - u0) / (hi - lo)
                        if all(abs(t - x) > eps for x in cuts[(c, d)]):
                            cuts[(c, d)].add(t)
                            changed = True
        if not changed:
            break
    cuts = {k: _snap(v, eps) for k, v in cuts.items()}
    for k, v in cuts.items():
        v[-1] = lens[k]

    # coverage: every refined stretch glued exactly once
    n_pieces = len(D.pieces)
    cover = {}
    for idx, (p, e, s0, s1, q, f, t0, t1, config) in enumerate(links):
        for a, b, lo, hi in ((p, e, s0, s1), (q, f, t1, t0)):
            pts = cuts[(a, b)]
            for x0, x1 in zip(pts, pts[1:]):
                if lo - eps <= x0 and x1 <= hi + eps:
                    cover.setdefault((a, b, x0), []).append(idx)
    for (a, b), pts in sorted(cuts.items()):
        for x0, x1 in zip(pts, pts[1:]):
            got = cover.get((a, b, x0), [])
            if len(got) != 1:
                partners = sorted({(links[i][4], links[i][5]) if (links[i][0], links[i][1]) == (a, b)
                                   else (links[i][0], links[i][1]) for i in got})
                raise GluingError(
                    f"edge {b} of piece {a} over [{x0:.6g}, {x1:.6g}] is glued {len(got)} times"
                    + (f" (partners {partners})" if partners else ""),
                    edge=(a, b), interval=(x0, x1), partners=partners)

    def node(a, b, s):
        m = len(D.pieces[a])
        if s <= eps:
            return ("c", a, b)
        if s >= lens[(a, b)] - eps:
            return ("c", a, (b + 1) % m)
        return ("m", a, b, round(s / eps))

    dsu = _DSU()
    nodes = set()
    for (a, b), pts in cuts.items():
        for s in pts:
            nodes.add(node(a, b, s))
    for p, e, s0, s1, q, f, t0, t1, _ in links:
        for s in cuts[(p, e)]:
            if s0 - eps <= s <= s1 + eps:
                t = t0 + (s - s0) * (t1 - t0) / (s1 - s0)
                dsu.union(node(p, e, s), node(q, f, t))
    n_edges = sum(len(v) - 1 for v in cuts.values())
    if n_edges % 2:
        raise GluingError("edge stretches do not pair up")

    groups = {}
    for x in sorted(nodes):
        groups.setdefault(dsu.find(x), []).append(x)
    classes = []
    hinge_comp = {}
    if angles is not None:
        for j, hg in enumerate(D.hinges):
            hinge_comp[("c", hg.next_piece, hg.next_corner)] = (angles.alpha[j],
                                                               geom.TWO_PI - angles.alpha_prime[j])
    for root in sorted(groups):
        members = groups[root]
        corners = [(x[1], x[2]) for x in members if x[0] == "c"]
        mids = [(x[1], x[2], x[3] * eps) for x in members if x[0] == "m"]
        total = sum(_corner_angle(D, i, k) for i, k in corners) + math.pi * len(mids)
        label = None
        if D.corner_labels is not None:
            labs = {D.corner_labels[i][k] for i, k in corners} - {None}
            if len(labs) > 1:
                raise GluingError(f"corners of different vertices {sorted(labs)} glued together")
            label = labs.pop() if labs else None
        comp = next((hinge_comp[x] for x in members if x in hinge_comp), None)
        classes.append(VertexClass(corners, mids, total, label, comp))
    M = GluedMetric(classes, n_pieces, n_edges // 2, tol.angle_eps, links)
    if M.euler_characteristic() != 2:
        raise GluingError(f"glued surface has Euler characteristic {M.euler_characteristic()}, not 2")
    return M


def _corner_angle(D, i, k):
    poly = D.pieces[i]
    return geom.ccw_angle(poly[k], poly[(k + 1) % len(poly)], poly[k - 1], D.tol)


@dataclass
class AlexandrovReport:
    convex: bool
    witnesses: list


def check_alexandrov(M: GluedMetric) -> AlexandrovReport:
    bad = [i for i, c in enumerate(M.classes) if c.angle > geom.TWO_PI + M.angle_eps]
    return AlexandrovReport(not bad, bad)


def gauss_bonnet_check(M: GluedMetric) -> float:
    return sum(geom.TWO_PI - c.angle for c in M.classes) - 2 * geom.TWO_PI


@dataclass
class RoundTripReport:
    ok: bool
    classes: dict               # P-vertex -> glued angle
    residual: float
    convex: bool
    problems: list


def roundtrip_check(P: Polyhedron, T_A: SurfaceTree, T_B: SurfaceTree, angle_tol=1e-9):
    """Forward pipeline then gluing; the glued vertices must be P's vertices
    with P's cone angles."""
    R = build_dissection(P, T_A, T_B)
    H = hinge_angles(R.D)
    M = glue_metric(R.D, H)
    problems = []
    by_label = {}
    for c in M.classes:
        if c.label is None:
            if abs(c.angle - geom.TWO_PI) > angle_tol:
                problems.append(f"unlabelled class with angle {c.angle}")
            continue
        if c.label in by_label:
            problems.append(f"vertex {c.label} split into several classes")
        by_label[c.label] = c.angle
        if abs(c.angle - P.cone_angle(c.label)) > angle_tol:
            problems.append(f"vertex {c.label}: glued angle {c.angle} != cone angle {P.cone_angle(c.label)}")
    if sorted(by_label) != list(range(P.n_vertices)):
        problems.append("glued vertex classes do not match the polyhedron vertices")
    for c in M.classes:
        if c.composition is not None and abs(sum(c.composition) - c.angle) > angle_tol:
            problems.append(f"hinge class angle {c.angle} != alpha + 2 pi - alpha'")
    residual = gauss_bonnet_check(M)
    if abs(residual) > 1e-6:
        problems.append(f"Gauss-Bonnet residual {residual}")
    if not M.classes:
        raise InvariantError("no vertex classes")
    return RoundTripReport(not problems, by_label, residual, check_alexandrov(M).convex, problems)
