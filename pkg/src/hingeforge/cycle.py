"""The separating cycle through all vertices of a polyhedron.

Given non-crossing spanning trees T1 and T2, the cycle is routed along
offset paths beside the edges of T1 (one per tour direction), following a
clockwise Euler tour of T1 and cutting across the wedge at every tour visit
whose wedge holds no T2 edge. The remaining visits are exactly the polyhedron
vertices, each once. All geometry is done in developed faces of G = T1 u T2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geom
from .errors import CycleError, InvariantError, NonCrossingError
from .geom import Rigid
from .noncross import SurfaceTree, check_noncrossing, validate_tree
from .subdivision import Subdivision
from .surface import Polyhedron, SurfacePoint, SurfacePolyline

T1, T2 = 0, 1  # tree labels inside the subdivision
SAMPLES_PER_SEGMENT = 16


@dataclass
class GFace:
    """One face of G: a flat piece of the surface bounded by tree edges."""

    cells: list
    place: dict                 # cell -> Rigid into the face plane
    walk: list                  # boundary half-edges, face on the left
    corners: tuple = ()         # (a, b): P-vertices where T2 turns into T1 and back
    t1_path: list = field(default_factory=list)
    t2_path: list = field(default_factory=list)
    area: float = 0.0

    def outline(self, S: Subdivision):
        return [S.placed(self.place, h) for h in self.walk]


@dataclass
class UnionGraph:
    P: Polyhedron
    S: Subdivision
    faces: list
    face_of_cell: dict
    nodes: list                 # refined vertex ids incident to G
    n_edges: int

    def tree_of(self, h):
        labs = self.S.labels(h)
        if len(labs) != 1:
            raise InvariantError(f"half-edge {h} carries labels {sorted(labs)}")
        return next(iter(labs))

    def rotation(self, r):
        """G half-edges leaving node ``r``, counterclockwise, with angular offsets."""
        return [(h, a) for h, a in self.S.rotation(r) if self.S.is_tree_edge(h)]

    def next_edge(self, h):
        """Successor of G half-edge ``h`` along the boundary of the face on its left."""
        S = self.S
        g = S.h_next[h]
        while not S.is_tree_edge(g):
            g = S.h_next[S.h_twin[g]]
        return g

    def face_of(self, h):
        return self.face_of_cell[self.S.h_cell[h]]

    def euler_characteristic(self):
        return len(self.nodes) - self.n_edges + len(self.faces)


def require_noncrossing(P, T1_, T2_):
    for name, T in (("T1", T1_), ("T2", T2_)):
        rep = validate_tree(P, T)
        if not rep.ok:
            raise NonCrossingError(f"{name} is not a valid cut tree: {rep.failures[0]['kind']}",
                                   stage="validate", failures=rep.failures)
    rep = check_noncrossing(P, T1_, T2_)
    if not rep.ok:
        v = rep.violations[0]
        raise NonCrossingError(f"trees cross: {v['kind']}", report=rep)
    return rep


def build_union_graph(P: Polyhedron, T1_: SurfaceTree, T2_: SurfaceTree, checked=False) -> UnionGraph:
    if not checked:
        require_noncrossing(P, T1_, T2_)
    S = Subdivision(P, [T1_, T2_])

    def crossable(h):
        return not S.is_tree_edge(h)

    faces, face_of_cell = [], {}
    for comp in S.components(crossable):
        cycles = S.boundary_cycles(comp, crossable)
        if len(cycles) != 1:
            raise InvariantError("a face of the union graph is not a disk")
        place = S.develop_region(comp, crossable)
        gf = GFace(comp, place, cycles[0])
        gf.area = sum(geom.signed_area([S.h_xy[h] for h in S.cells[c].halfedges]) for c in comp)
        for c in comp:
            face_of_cell[c] = len(faces)
        faces.append(gf)
    G = UnionGraph(P, S, faces, face_of_cell, [], 0)
    G.nodes = sorted({S.h_origin[h] for h in range(S.n_halfedges) if S.is_tree_edge(h)})
    G.n_edges = sum(1 for h in range(S.n_halfedges) if S.is_tree_edge(h)) // 2
    for gf in faces:
        _split_face_walk(G, gf)
    if G.euler_characteristic() != 2:
        raise InvariantError(f"union graph has V - E + F = {G.euler_characteristic()}")
    return G


def _split_face_walk(G: UnionGraph, gf: GFace):
    """Rotate the walk to start at the T2 -> T1 corner and split it into the two tree paths."""
    labs = [G.tree_of(h) for h in gf.walk]
    m = len(labs)
    starts = [i for i in range(m) if labs[i] == T1 and labs[i - 1] == T2]
    ends = [i for i in range(m) if labs[i] == T2 and labs[i - 1] == T1]
    if len(starts) != 1 or len(ends) != 1:
        raise InvariantError("a face of the union graph does not consist of one T1 path and one T2 path")
    i0 = starts[0]
    walk = gf.walk[i0:] + gf.walk[:i0]
    k = (ends[0] - i0) % m
    gf.walk = walk
    gf.t1_path, gf.t2_path = walk[:k], walk[k:]
    a, b = G.S.h_origin[walk[0]], G.S.h_origin[walk[k]]
    if not (G.S.is_pvertex(a) and G.S.is_pvertex(b)):
        raise InvariantError("trees meet at a point that is not a polyhedron vertex")
    gf.corners = (a, b)


# ---------------------------------------------------------------------------
# clearances


@dataclass(frozen=True)
class ClearanceParams:
    """``alpha`` and ``epsilon`` follow the construction; ``offset`` is the
    actual sidewalk distance from its edge and ``radius`` the distance of the
    sidewalk corners from the edge endpoints."""

    alpha: float
    epsilon: float
    offset: float
    radius: float


def min_incident_angle(G: UnionGraph):
    best = math.inf
    for r in G.nodes:
        rot = G.rotation(r)
        total = G.P.cone_angle(r) if G.S.is_pvertex(r) else geom.TWO_PI
        offs = [a for _, a in rot] + [total]
        for i in range(len(rot)):
            best = min(best, offs[i + 1] - offs[i])
    return best


def min_vertex_edge_distance(G: UnionGraph):
    S = G.S
    best = math.inf
    for gf in G.faces:
        pts = [S.placed(gf.place, h) for h in gf.walk]
        ids = [S.h_origin[h] for h in gf.walk]
        m = len(pts)
        for i in range(m):
            for j in range(m):
                if ids[i] in (ids[j], ids[(j + 1) % m]):
                    continue
                best = min(best, geom.point_segment_distance(pts[i], pts[j], pts[(j + 1) % m]))
    return best


def min_edge_length(G: UnionGraph):
    S = G.S
    return min(S.length(h) for h in range(S.n_halfedges) if S.is_tree_edge(h))


def clearances(G: UnionGraph) -> ClearanceParams:
    ang = min_incident_angle(G)
    if ang <= G.P.tol.angle_eps:
        raise CycleError("two incident edges of G leave a node in the same direction")
    alpha = min(ang / 3.0, math.pi / 2)
    eps = min_vertex_edge_distance(G) / 3.0
    if not eps > G.P.tol.absolute_eps:
        raise CycleError("a vertex of G lies on a non-incident edge")
    offset = min(eps, 1.5 * eps * math.sin(alpha), math.tan(alpha) * min_edge_length(G) / 3.0) \
        if alpha < math.pi / 2 else min(eps, 1.5 * eps)
    return ClearanceParams(alpha, eps, offset, offset / math.sin(alpha))


# ---------------------------------------------------------------------------
# Euler tour


def euler_tour(rotation, start=None):
    """Tour of a tree given as ``node -> neighbours in cyclic order``.

    After arriving at v from u, leave towards the neighbour following u in
    ``rotation[v]``. Starts along ``rotation[start][0]``.
    """
    if start is None:
        start = min(n for n in rotation if rotation[n])
    if not rotation.get(start):
        return []
    first = (start, rotation[start][0])
    tour, (u, v) = [], first
    while True:
        tour.append((u, v))
        nb = rotation[v]
        w = nb[(nb.index(u) + 1) % len(nb)]
        u, v = v, w
        if (u, v) == first:
            return tour


def clockwise_rotation(G: UnionGraph, label=T1):
    """node -> (neighbour ids clockwise, {(u, v): half-edge}) for one tree of G."""
    S = G.S
    rot, index = {}, {}
    for r in G.nodes:
        out = [h for h, _ in G.rotation(r) if S.in_tree(h, label)]
        if out:
            rot[r] = [S.h_dest[h] for h in reversed(out)]
            for h in out:
                index[(r, S.h_dest[h])] = h
    return rot, index


# ---------------------------------------------------------------------------
# the cycle


@dataclass
class Sidewalk:
    halfedge: int
    face: int
    U: tuple
    V: tuple
    p: tuple
    q: tuple


@dataclass
class SeparatingCycle:
    vertex_order: list
    curve: SurfacePolyline
    side_map: dict
    clearance: ClearanceParams
    tour: list
    sidewalks: list
    crosswalks: list          # refined vertices where the tour was short-cut
    face_curves: dict         # G-face index -> planar polyline from corner a to corner b
    curve_cells: list         # per curve point: (cell, chart xy) for re-placement
    graph: UnionGraph = None


def _arc(V, r, a0, sweep, max_step=math.pi / 3):
    """Points on a clockwise arc around V from angle a0 through ``sweep`` radians."""
    n = max(1, math.ceil(sweep / max_step))
    return [geom.add(V, (r * math.cos(a0 - sweep * i / n), r * math.sin(a0 - sweep * i / n)))
            for i in range(1, n)]


def _face_curve(G: UnionGraph, gf: GFace, cl: ClearanceParams):
    """Planar polyline in face ``gf`` from corner a to corner b beside the T1 path."""
    S = G.S
    al, rho = cl.alpha, cl.radius
    path = gf.t1_path
    pts = [S.placed(gf.place, path[0])]
    walks, crosses = [], []
    for i, h in enumerate(path):
        U, V = S.placed(gf.place, h), S.placed_dest(gf.place, h)
        d = geom.unit(geom.sub(V, U))
        back = math.atan2(-d[1], -d[0])
        fwd = math.atan2(d[1], d[0])
        p = geom.add(U, (rho * math.cos(fwd + al), rho * math.sin(fwd + al)))
        q = geom.add(V, (rho * math.cos(back - al), rho * math.sin(back - al)))
        walks.append(Sidewalk(h, G.face_of(h), U, V, p, q))
        pts += [p, q]
        if i + 1 < len(path):
            g = path[i + 1]
            if G.next_edge(h) != g:
                raise InvariantError("T1 path of a face is not contiguous")
            W = S.placed_dest(gf.place, g)
            a_in = math.atan2(U[1] - V[1], U[0] - V[0]) - al
            a_out = math.atan2(W[1] - V[1], W[0] - V[0]) + al
            sweep = (a_in - a_out) % geom.TWO_PI
            pts += _arc(V, rho, a_in, sweep)
            crosses.append(S.h_dest[h])
    pts.append(S.placed_dest(gf.place, path[-1]))
    return pts, walks, crosses


def _check_face_curve(G: UnionGraph, fi: int, gf: GFace, pts, cl: ClearanceParams):
    S = G.S
    tol = G.P.tol
    segs = list(zip(pts, pts[1:]))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            kind = geom.segment_classify(segs[i], segs[j], tol)
            if kind == geom.DISJOINT or (j == i + 1 and kind == geom.SHARED_ENDPOINT):
                continue
            raise CycleError(f"cycle is not simple inside face {fi}")
    bd = [S.placed(gf.place, h) for h in gf.walk]
    ids = [S.h_origin[h] for h in gf.walk]
    m = len(bd)
    a, b = gf.corners
    for k in range(m):
        e = (bd[k], bd[(k + 1) % m])
        for i, s in enumerate(segs):
            kind = geom.segment_classify(s, e, tol)
            if kind == geom.DISJOINT:
                continue
            ok_end = (i == 0 and a in (ids[k], ids[(k + 1) % m])) or \
                     (i == len(segs) - 1 and b in (ids[k], ids[(k + 1) % m]))
            if kind == geom.SHARED_ENDPOINT and ok_end:
                continue
            raise CycleError(f"cycle touches an edge of G inside face {fi}")
    k = len(gf.t1_path)
    r1 = bd[:k] + [bd[k]] + pts[::-1][1:-1]
    r2 = pts + bd[k + 1:]
    a1, a2 = geom.signed_area(r1), geom.signed_area(r2)
    if a1 <= 0 or a2 <= 0 or abs(a1 + a2 - gf.area) > 1e-9 * max(gf.area, 1.0):
        raise CycleError(f"cycle does not split face {fi} into a T1 side and a T2 side")
    nudge = cl.offset * 1e-3
    for path, region, want in ((range(k), r1, "T1"), (range(k, m), r2, "T2")):
        for idx in path:
            A, B = bd[idx], bd[(idx + 1) % m]
            n = geom.scale(geom.rotate(geom.unit(geom.sub(B, A)), math.pi / 2), nudge)
            for s in range(SAMPLES_PER_SEGMENT):
                x = geom.add(geom.lerp(A, B, (s + 0.5) / SAMPLES_PER_SEGMENT), n)
                if geom.point_in_polygon(x, region, tol) != 1:
                    raise CycleError(f"{want} edge not on the {want} side of the cycle in face {fi}")
    return r1, r2


def _to_surface(G: UnionGraph, gf: GFace, pts):
    """Split a planar face polyline at internal mesh edges and map back to the surface.

    Returns (SurfacePoints, carrier faces, [(cell, chart xy)])."""
    S, P = G.S, G.P
    tol = P.tol
    polys = {c: [gf.place[c].apply(S.h_xy[h]) for h in S.cells[c].halfedges] for c in gf.cells}
    internal = []
    for c in gf.cells:
        for h in S.cells[c].halfedges:
            if not S.is_tree_edge(h) and h < S.h_twin[h]:
                internal.append((S.placed(gf.place, h), S.placed_dest(gf.place, h)))

    def locate(x):
        best = None
        for c, poly in polys.items():
            s = geom.point_in_polygon(x, poly, tol)
            if s == 1:
                return c
            if s == 0 and best is None:
                best = c
        if best is None:
            raise InvariantError("cycle point outside its face")
        return best

    out_pts, carriers, cells = [], [], []

    def convert(cell, x):
        xy = gf.place[cell].inverse().apply(x)
        return P.point_from_chart(S.cells[cell].mesh_face, xy), (cell, xy)

    for a, b in zip(pts, pts[1:]):
        ts = {0.0, 1.0}
        for e in internal:
            if geom.segment_classify((a, b), e, tol) != geom.DISJOINT:
                x = geom.intersection_point((a, b), e, tol)
                if x is not None:
                    ts.add(min(max(geom.segment_param(x, a, b), 0.0), 1.0))
        ts = sorted(ts)
        for t0, t1 in zip(ts, ts[1:]):
            if (t1 - t0) * geom.dist(a, b) <= tol.absolute_eps:
                continue
            c = locate(geom.lerp(a, b, 0.5 * (t0 + t1)))
            if not out_pts:
                sp, cc = convert(c, geom.lerp(a, b, t0))
                out_pts.append(sp)
                cells.append(cc)
            sp, cc = convert(c, geom.lerp(a, b, t1))
            out_pts.append(sp)
            cells.append(cc)
            carriers.append(S.cells[c].mesh_face)
    return out_pts, carriers, cells


def build_separating_cycle(P: Polyhedron, T1_: SurfaceTree, T2_: SurfaceTree, G: UnionGraph = None):
    if G is None:
        G = build_union_graph(P, T1_, T2_)
    S = G.S
    cl = clearances(G)
    rot, index = clockwise_rotation(G, T1)
    missing = [v for v in range(P.n_vertices) if v not in rot]
    if missing:
        raise CycleError(f"T1 does not reach vertices {missing}")
    tour_pairs = euler_tour(rot, start=0)
    tour = [index[e] for e in tour_pairs]
    m = len(tour)

    # a tour step ends in a visit when the next G edge on its left is a T2 edge
    visit = [G.tree_of(G.next_edge(h)) == T2 for h in tour]
    for h, vis in zip(tour, visit):
        if vis and not S.is_pvertex(S.h_dest[h]):
            raise InvariantError("T2 edge incident to a bend of T1")
    if not any(visit):
        raise CycleError("tour never reaches a T2 edge")
    k0 = (visit.index(True) + 1) % m
    tour = tour[k0:] + tour[:k0]
    visit = visit[k0:] + visit[:k0]

    order, sidewalks, crosswalks, face_curves = [], [], [], {}
    points, carriers, curve_cells = [], [], []
    i = 0
    while i < m:
        fi = G.face_of(tour[i])
        gf = G.faces[fi]
        if tour[i] != gf.t1_path[0]:
            raise InvariantError("tour enters a face away from its T2 -> T1 corner")
        j = i + len(gf.t1_path)
        if tour[i:j] != gf.t1_path or not visit[j - 1] or any(visit[i:j - 1]):
            raise InvariantError("tour does not follow the T1 path of a face")
        pts, walks, crosses = _face_curve(G, gf, cl)
        _check_face_curve(G, fi, gf, pts, cl)
        face_curves[fi] = pts
        sidewalks += walks
        crosswalks += crosses
        order.append(gf.corners[0])
        sp, car, cells = _to_surface(G, gf, pts)
        if points:
            if points[-1] != sp[0]:
                raise InvariantError("face curves do not join at a vertex")
            sp, cells = sp[1:], cells[1:]
        points += sp
        carriers += car
        curve_cells += cells
        i = j
    if points[0] != points[-1]:
        raise InvariantError("cycle does not close")
    points.pop()
    curve_cells.pop()
    if sorted(order) != list(range(P.n_vertices)):
        raise CycleError("cycle does not visit every vertex exactly once")
    curve = SurfacePolyline(tuple(points), tuple(carriers), closed=True)
    return SeparatingCycle(order, curve, {"interior": "T1", "exterior": "T2"}, cl, tour_pairs,
                           sidewalks, crosswalks, face_curves, curve_cells, G)


def forced_vertex_order(G: UnionGraph):
    """Cyclic vertex order forced by the faces of G: each face links its
    T2 -> T1 corner to its T1 -> T2 corner."""
    succ = {}
    for gf in G.faces:
        a, b = gf.corners
        if a in succ:
            raise CycleError(f"vertex {a} starts two forced connections")
        succ[a] = b
    n = G.P.n_vertices
    if sorted(succ) != list(range(n)):
        raise CycleError("forced connections do not cover every vertex")
    order, v = [0], succ[0]
    while v != 0:
        if len(order) > n:
            break
        order.append(v)
        v = succ[v]
    if len(order) != n:
        raise CycleError("forced connections do not form a single cycle")
    return order


def same_cyclic_order(a, b, reflect=True):
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    cands = [b, b[::-1]] if reflect else [b]
    for c in cands:
        if a[0] in c:
            k = c.index(a[0])
            if c[k:] + c[:k] == a:
                return True
    return False
