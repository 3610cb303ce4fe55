"""Cut trees drawn on a polyhedron: loading, validation and the non-crossing test."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

from . import geom
from .errors import FormatError
from .surface import EDGE, FACE, VERTEX, Polyhedron, SurfacePoint

PROPER_CROSS = "proper-cross"
INTERIOR_TOUCH = "interior-touch"
INTERLEAVED = "interleaved-at-vertex"


@dataclass(frozen=True)
class Segment:
    edge: int          # index of the tree edge this segment belongs to
    k: int             # position along the edge polyline
    p: SurfacePoint
    q: SurfacePoint
    carrier: int       # face whose chart holds the segment (a face of ``along`` if set)
    along: int | None  # mesh edge id when the segment runs along a mesh edge
    ids: tuple         # drawing-point ids of p and q


@dataclass
class TreeEdge:
    a: int
    b: int
    points: tuple      # full polyline, endpoints included
    carriers: tuple


@dataclass
class SurfaceTree:
    """Tree drawn on a surface with face-local polyline edges.

    Drawing points are the nodes plus every interior polyline point; a
    drawing point id is ``("n", node)`` or ``("b", edge, k)``.
    """

    nodes: list
    edges: list
    node_ids: list = field(default_factory=list)
    segments: list = field(default_factory=list)

    def node_of_vertex(self):
        return {p.ref: i for i, p in enumerate(self.nodes) if p.kind == VERTEX}

    def degree(self):
        deg = [0] * len(self.nodes)
        for e in self.edges:
            deg[e.a] += 1
            deg[e.b] += 1
        return deg

    def length(self, P: Polyhedron) -> float:
        return sum(geom.dist(P.chart_point(s.p, s.carrier), P.chart_point(s.q, s.carrier))
                   for s in self.segments)


# ---------------------------------------------------------------------------
# loading


def point_from_json(P: Polyhedron, obj) -> SurfacePoint:
    try:
        kind = obj["kind"]
        ref = obj["ref"]
        params = obj.get("params", [])
        if kind == VERTEX:
            return P.vertex_point(int(ref))
        if kind == EDGE:
            u, v = (int(x) for x in ref)
            return P.edge_point(u, v, float(params[0]))
        if kind == FACE:
            return P.face_point(int(ref), [float(x) for x in params])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError):
        raise FormatError(f"malformed anchor {obj!r}") from None
    raise FormatError(f"unknown anchor kind {obj.get('kind')!r}")


def _resolve_segment(P: Polyhedron, p, q, carrier):
    along = P.on_common_edge(p, q)
    if along is not None:
        faces = P.edge_faces(along)
        if carrier is not None and carrier not in faces:
            raise FormatError(f"carrier face {carrier} does not contain edge {P.edges[along]}")
        return (carrier if carrier is not None else min(faces)), along
    common = set(P.faces_of_point(p)) & set(P.faces_of_point(q))
    if carrier is not None:
        if carrier not in common:
            raise FormatError(f"segment endpoints do not both lie on carrier face {carrier}")
        return carrier, None
    if not common:
        raise FormatError("segment endpoints share no face")
    if len(common) > 1:
        raise FormatError(f"segment carrier ambiguous among faces {sorted(common)}")
    return common.pop(), None


def tree_from_dict(P: Polyhedron, data) -> SurfaceTree:
    try:
        raw_nodes = data["nodes"]
        raw_edges = data["edges"]
    except (KeyError, TypeError):
        raise FormatError("tree JSON needs 'nodes' and 'edges'") from None
    index, nodes, ids = {}, [], []
    for n in raw_nodes:
        try:
            nid = n["id"]
            anchor = n["anchor"]
        except (KeyError, TypeError):
            raise FormatError(f"malformed node {n!r}") from None
        if nid in index:
            raise FormatError(f"duplicate node id {nid!r}")
        index[nid] = len(nodes)
        ids.append(nid)
        nodes.append(point_from_json(P, anchor))
    edges, segments = [], []
    for j, e in enumerate(raw_edges):
        try:
            a, b = index[e["from"]], index[e["to"]]
        except (KeyError, TypeError):
            raise FormatError(f"edge {j} references unknown node") from None
        mids = [point_from_json(P, x) for x in e.get("polyline", [])]
        pts = (nodes[a], *mids, nodes[b])
        given = e.get("carrier_faces") or [None] * (len(pts) - 1)
        if len(given) != len(pts) - 1:
            raise FormatError(f"edge {j}: carrier_faces needs {len(pts) - 1} entries")
        carriers = []
        for k in range(len(pts) - 1):
            c = given[k]
            c = None if c is None else int(c)
            carrier, along = _resolve_segment(P, pts[k], pts[k + 1], c)
            carriers.append(carrier)
            pid = ("n", a) if k == 0 else ("b", j, k)
            qid = ("n", b) if k == len(pts) - 2 else ("b", j, k + 1)
            segments.append(Segment(j, k, pts[k], pts[k + 1], carrier, along, (pid, qid)))
        edges.append(TreeEdge(a, b, pts, tuple(carriers)))
    return SurfaceTree(nodes, edges, ids, segments)


def load_tree(P: Polyhedron, text: str) -> SurfaceTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"tree file is not JSON: {exc}") from None
    return tree_from_dict(P, data)


# ---------------------------------------------------------------------------
# per-face bookkeeping


def face_buckets(P: Polyhedron, T: SurfaceTree):
    """Map face -> [(segment index, (chart p, chart q))]; edge-running segments
    are listed in both faces of their mesh edge."""
    buckets = defaultdict(list)
    for i, s in enumerate(T.segments):
        faces = P.edge_faces(s.along) if s.along is not None else (s.carrier,)
        for f in sorted(set(faces)):
            buckets[f].append((i, (P.chart_point(s.p, f), P.chart_point(s.q, f))))
    return buckets


def _same_point(P, p, q):
    if p.kind != q.kind or p.ref != q.ref:
        return False
    if p.kind == VERTEX:
        return True
    f = P.faces_of_point(p)[0]
    return geom.dist(P.chart_point(p, f), P.chart_point(q, f)) <= P.tol.absolute_eps


def _drawing_points(T: SurfaceTree):
    pts = [(("n", i), p) for i, p in enumerate(T.nodes)]
    for j, e in enumerate(T.edges):
        for k in range(1, len(e.points) - 1):
            pts.append((("b", j, k), e.points[k]))
    return pts


def _location_key(p: SurfacePoint):
    return (p.kind, p.ref, tuple(round(x, 9) for x in p.params))


# ---------------------------------------------------------------------------
# validation


@dataclass
class TreeReport:
    ok: bool
    failures: list

    def to_json(self):
        return {"ok": self.ok, "failures": self.failures}


def validate_tree(P: Polyhedron, T: SurfaceTree) -> TreeReport:
    """Check tree-ness, spanning, bend degrees and self-noncrossing."""
    failures = []
    n = len(T.nodes)

    seen = defaultdict(list)
    for i, p in enumerate(T.nodes):
        if p.kind == VERTEX:
            seen[p.ref].append(i)
    missing = [v for v in range(P.n_vertices) if v not in seen]
    if missing:
        failures.append({"kind": "not-spanning", "vertices": missing})

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cyclic = []
    for j, e in enumerate(T.edges):
        ra, rb = find(e.a), find(e.b)
        if ra == rb:
            cyclic.append(j)
        else:
            parent[ra] = rb
    if cyclic:
        failures.append({"kind": "not-acyclic", "edges": cyclic})
    comps = len({find(i) for i in range(n)})
    if comps > 1:
        failures.append({"kind": "not-connected", "components": comps})

    deg = T.degree()
    bad_bends = [i for i, p in enumerate(T.nodes) if p.kind != VERTEX and deg[i] != 2]
    if bad_bends:
        failures.append({"kind": "bend-degree", "nodes": [T.node_ids[i] for i in bad_bends]})

    dps = _drawing_points(T)
    for x in range(len(dps)):
        for y in range(x + 1, len(dps)):
            if _same_point(P, dps[x][1], dps[y][1]):
                failures.append({"kind": "self-intersection", "location": dps[x][1].to_json(P),
                                 "detail": "repeated drawing point"})

    for i, s in enumerate(T.segments):
        f = s.carrier
        if geom.dist(P.chart_point(s.p, f), P.chart_point(s.q, f)) <= P.tol.absolute_eps:
            failures.append({"kind": "degenerate-segment", "edge": s.edge})
    if any(f["kind"] == "degenerate-segment" for f in failures):
        return TreeReport(False, failures)

    found = set()
    for f, items in sorted(face_buckets(P, T).items()):
        for x in range(len(items)):
            for y in range(x + 1, len(items)):
                i, si = items[x]
                j, sj = items[y]
                kind = geom.segment_classify(si, sj, P.tol)
                if kind == geom.DISJOINT:
                    continue
                if kind == geom.SHARED_ENDPOINT:
                    a, b = T.segments[i], T.segments[j]
                    if set(a.ids) & set(b.ids):
                        continue
                pt = geom.intersection_point(si, sj, P.tol) or si[0]
                loc = P.point_from_chart(f, pt)
                key = (_location_key(loc), min(i, j), max(i, j))
                if key not in found:
                    found.add(key)
                    failures.append({"kind": "self-intersection", "location": loc.to_json(P),
                                     "edges": sorted({T.segments[i].edge, T.segments[j].edge})})
    return TreeReport(not failures, failures)


# ---------------------------------------------------------------------------
# non-crossing


@dataclass
class NonCrossReport:
    ok: bool
    violations: list

    def to_json(self, P=None):
        return {"ok": self.ok,
                "violations": [{"kind": v["kind"], "location": v["location"].to_json(P),
                                "edges": [list(e) for e in v["edges"]]} for v in self.violations]}


def _vertex_directions(P: Polyhedron, T: SurfaceTree, label):
    """vertex -> [(polar angle, (label, tree edge))] for segments leaving P-vertices."""
    out = defaultdict(list)
    for s in T.segments:
        for a, b in ((s.p, s.q), (s.q, s.p)):
            if a.kind != VERTEX:
                continue
            f = s.carrier
            d = geom.sub(P.chart_point(b, f), P.chart_point(a, f))
            out[a.ref].append((P.polar_angle(a.ref, f, d), (label, s.edge)))
    return out


def cyclic_runs(labels):
    """Number of maximal runs of equal labels in a cyclic sequence."""
    n = len(labels)
    if n == 0:
        return 0
    changes = sum(1 for i in range(n) if labels[i] != labels[i - 1])
    return max(changes, 1)


def check_noncrossing(P: Polyhedron, T1: SurfaceTree, T2: SurfaceTree) -> NonCrossReport:
    """Edges may meet only at common P-vertices, and at every common vertex the
    edges of each tree must be contiguous in the cyclic order around it."""
    violations = {}
    b1, b2 = face_buckets(P, T1), face_buckets(P, T2)
    for f in sorted(set(b1) & set(b2)):
        for i, s1 in b1[f]:
            for j, s2 in b2[f]:
                kind = geom.segment_classify(s1, s2, P.tol)
                if kind == geom.DISJOINT:
                    continue
                pt = geom.intersection_point(s1, s2, P.tol) or s1[0]
                loc = P.point_from_chart(f, pt)
                if kind == geom.SHARED_ENDPOINT and loc.kind == VERTEX:
                    continue
                vkind = PROPER_CROSS if kind == geom.PROPER_CROSS else INTERIOR_TOUCH
                edges = ((1, T1.segments[i].edge), (2, T2.segments[j].edge))
                violations.setdefault((vkind, _location_key(loc), edges),
                                      {"kind": vkind, "location": loc, "edges": edges})

    d1, d2 = _vertex_directions(P, T1, 1), _vertex_directions(P, T2, 2)
    for v in sorted(set(d1) & set(d2)):
        around = sorted(d1[v] + d2[v])
        if cyclic_runs([lab for _, (lab, _) in around]) > 2:
            edges = tuple(sorted({e for _, e in around}))
            loc = P.vertex_point(v)
            violations[(INTERLEAVED, _location_key(loc), edges)] = {
                "kind": INTERLEAVED, "location": loc, "edges": edges}
    out = [violations[k] for k in sorted(violations)]
    return NonCrossReport(not out, out)
