"""Nets, the hinged dissection they induce, hinge angles and classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geom
from .cycle import T1, T2, SeparatingCycle, build_separating_cycle, build_union_graph, require_noncrossing
from .errors import InvariantError, NotANetError
from .geom import Rigid, Tolerance
from .noncross import SurfaceTree
from .subdivision import Subdivision
from .surface import Polyhedron, wedge_angle

# ---------------------------------------------------------------------------
# nets


@dataclass
class Net:
    boundary: list              # planar points, counterclockwise
    place: dict                 # subdivision cell -> Rigid into the net plane
    walk: list                  # boundary half-edges of the subdivision
    tree_image: list            # planar segments of the other tree(s) inside the net
    vertex_images: dict         # (vertex id, occurrence) -> planar point
    cut_length: float
    label: int

    @property
    def area(self):
        return geom.signed_area(self.boundary)

    @property
    def perimeter(self):
        return geom.perimeter(self.boundary)

    def polygon(self):
        return geom.PlanarPolygon(tuple(self.boundary))


def _cell_polygons(S: Subdivision, place):
    return {c: [place[c].apply(S.h_xy[h]) for h in S.cells[c].halfedges] for c in place}


def _overlapping_cells(polys, tol):
    items = sorted(polys.items())
    boxes = []
    for c, pts in items:
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        boxes.append((min(xs), max(xs), min(ys), max(ys)))
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            a, b = boxes[i], boxes[j]
            if a[1] < b[0] or b[1] < a[0] or a[3] < b[2] or b[3] < a[2]:
                continue
            if geom.polygons_overlap(items[i][1], items[j][1], tol):
                return items[i][0], items[j][0]
    return None


def unfold_subdivision(S: Subdivision, label: int) -> Net:
    """Cut the surface along tree ``label`` of the subdivision and lay it flat."""
    P = S.P

    def crossable(h):
        return not S.in_tree(h, label)

    cells = range(len(S.cells))
    place = S.develop_region(cells, crossable)
    cycles = S.boundary_cycles(cells, crossable)
    if len(cycles) != 1:
        raise NotANetError("cutting along the tree does not leave a disk")
    walk = cycles[0]
    boundary = [S.placed(place, h) for h in walk]
    hit = _overlapping_cells(_cell_polygons(S, place), P.tol)
    if hit is not None:
        raise NotANetError(f"unfolding overlaps itself (cells {hit[0]} and {hit[1]})",
                           cells=hit)
    if not geom.is_simple(boundary, P.tol):
        raise NotANetError("unfolding boundary is not simple")
    images, seen = {}, {}
    for h in walk:
        r = S.h_origin[h]
        if S.is_pvertex(r):
            k = seen.get(r, 0)
            seen[r] = k + 1
            images[(r, k)] = S.placed(place, h)
    tree_image = []
    for h in range(S.n_halfedges):
        if S.is_tree_edge(h) and not S.in_tree(h, label) and h < S.h_twin[h]:
            tree_image.append((S.placed(place, h), S.placed_dest(place, h)))
    cut = sum(S.length(h) for h in range(S.n_halfedges) if S.in_tree(h, label)) / 2
    return Net(boundary, place, walk, tree_image, images, cut, label)


def unfold_net(P: Polyhedron, T: SurfaceTree, other: SurfaceTree = None) -> Net:
    """Net of ``P`` cut along ``T``; the drawing of ``other`` is carried into the net."""
    trees = [T] if other is None else [T, other]
    return unfold_subdivision(Subdivision(P, trees), 0)


# ---------------------------------------------------------------------------
# the hinged dissection


@dataclass
class Hinge:
    vertex: int
    prev_piece: int
    prev_corner: int
    next_piece: int
    next_corner: int
    active: bool = True


@dataclass
class HingedDissection:
    """Cyclic chain: hinge i joins piece i-1 (at ``prev_corner``) to piece i."""

    pieces: list                # per piece: local-coordinate vertex list, counterclockwise
    hinges: list
    placement_A: list
    placement_B: list
    corner_labels: list = None  # per piece: P-vertex id or None per corner
    meta: dict = field(default_factory=dict)
    tol: Tolerance = geom.DEFAULT_TOL
    provenance: dict = None     # surface data for angle checks, when built from a polyhedron

    @property
    def n(self):
        return len(self.pieces)

    def placed(self, i, config):
        R = (self.placement_A if config == "A" else self.placement_B)[i]
        return [R.apply(p) for p in self.pieces[i]]

    def hinge_point(self, j, config, side="next"):
        hg = self.hinges[j]
        i, k = (hg.next_piece, hg.next_corner) if side == "next" else (hg.prev_piece, hg.prev_corner)
        R = (self.placement_A if config == "A" else self.placement_B)[i]
        return R.apply(self.pieces[i][k])

    def piece_area(self, i):
        return geom.signed_area(self.pieces[i])

    def total_area(self):
        return sum(self.piece_area(i) for i in range(self.n))

    def with_placements(self, placement_A=None, placement_B=None):
        return HingedDissection(self.pieces, self.hinges,
                                placement_A or self.placement_A, placement_B or self.placement_B,
                                self.corner_labels, dict(self.meta), self.tol, self.provenance)


@dataclass
class Dissection:
    """Everything the forward pipeline produces."""

    net_A: Net
    net_B: Net
    D: HingedDissection
    cycle: SeparatingCycle


def _piece_frame(S, gf):
    pts = gf.outline(S)
    L = geom.dist(pts[0], pts[1])
    return Rigid.align(pts[0], pts[1], (0.0, 0.0), (L, 0.0))


def _piece_placement(S, gf, frame, net: Net, tol):
    """Rigid motion taking piece-local coordinates into the net plane."""
    R = None
    for c in gf.cells:
        local = frame.compose(gf.place[c])
        Rc = net.place[c].compose(local.inverse())
        if R is None:
            R = Rc
        else:
            for h in S.cells[c].halfedges:
                x = local.apply(S.h_xy[h])
                if geom.dist(R.apply(x), Rc.apply(x)) > 1e3 * tol.absolute_eps:
                    raise InvariantError("piece is not rigid inside a net")
    return R


def build_dissection(P: Polyhedron, T_A: SurfaceTree, T_B: SurfaceTree) -> Dissection:
    require_noncrossing(P, T_A, T_B)
    G = build_union_graph(P, T_A, T_B, checked=True)
    S = G.S
    net_A = unfold_subdivision(S, T1)
    net_B = unfold_subdivision(S, T2)
    C = build_separating_cycle(P, T_A, T_B, G)
    order = C.vertex_order
    n = len(order)
    by_start = {gf.corners[0]: fi for fi, gf in enumerate(G.faces)}
    pieces, labels, pA, pB, faces = [], [], [], [], []
    for i, v in enumerate(order):
        fi = by_start[v]
        gf = G.faces[fi]
        if gf.corners[1] != order[(i + 1) % n]:
            raise InvariantError("piece corners disagree with the cycle order")
        frame = _piece_frame(S, gf)
        pieces.append([frame.apply(p) for p in gf.outline(S)])
        labels.append([S.h_origin[h] if S.is_pvertex(S.h_origin[h]) else None for h in gf.walk])
        pA.append(_piece_placement(S, gf, frame, net_A, P.tol))
        pB.append(_piece_placement(S, gf, frame, net_B, P.tol))
        faces.append(fi)
    hinges, dirs = [], []
    for i, v in enumerate(order):
        prev = (i - 1) % n
        gprev, gnext = G.faces[faces[prev]], G.faces[faces[i]]
        k = len(gprev.t1_path)
        hinges.append(Hinge(v, prev, k, i, 0, True))
        dirs.append((_bisector_direction(S, gprev.walk[k], gprev.walk[k - 1]),
                     _bisector_direction(S, gnext.walk[0], gnext.walk[-1])))
    D = HingedDissection(pieces, hinges, pA, pB, labels,
                         {"source": "hingeforge", "tolerance": P.tol.absolute_eps,
                          "angle_tolerance": P.tol.angle_eps},
                         P.tol, {"P": P, "directions": dirs, "epsilon": C.clearance.epsilon})
    check_dissection(D, net_A, net_B)
    return Dissection(net_A, net_B, D, C)


def _bisector_direction(S: Subdivision, h_out, h_in):
    """Surface direction ``(mesh face, vector)`` halving the corner of a region
    at the origin of ``h_out``, the corner lying counterclockwise from ``h_out``
    to the reverse of ``h_in``."""
    stop = S.h_twin[h_in]
    fan, h = [], h_out
    while True:
        fan.append(h)
        if h == stop:
            break
        h = S.h_twin[S.h_prev[h]]
        if h == h_out:
            raise InvariantError("corner fan does not close")
    angles = [S.corner_angle(g) for g in fan[:-1]]
    half = 0.5 * sum(angles)
    for g, a in zip(fan, angles):
        if half <= a:
            f, vec = S.direction(g)
            return f, geom.rotate(geom.unit(vec), half)
        half -= a
    f, vec = S.direction(fan[-2])
    return f, geom.rotate(geom.unit(vec), angles[-1])


def tiling_defects(D: HingedDissection, config, target=None):
    """Problems with the placed pieces of one configuration as a tiling."""
    out = []
    polys = [D.placed(i, config) for i in range(D.n)]
    for i in range(D.n):
        for j in range(i + 1, D.n):
            if geom.polygons_overlap(polys[i], polys[j], D.tol):
                out.append({"kind": "overlap", "pieces": [i, j], "config": config})
    for j, hg in enumerate(D.hinges):
        a, b = D.hinge_point(j, config, "prev"), D.hinge_point(j, config, "next")
        if geom.dist(a, b) > D.tol.absolute_eps:
            out.append({"kind": "hinge-split", "hinge": j, "config": config, "gap": geom.dist(a, b)})
    if target is not None:
        # disjoint pieces inside the target with the same total area tile it
        area = geom.signed_area(target)
        deficit = abs(area - D.total_area())
        if deficit > 1e-8 * area:
            out.append({"kind": "area-deficit", "config": config, "area": deficit})
        for i, pts in enumerate(polys):
            m = len(pts)
            probes = pts + [geom.lerp(pts[k], pts[(k + 1) % m], 0.5) for k in range(m)]
            if any(geom.point_in_polygon(x, target, D.tol) < 0 for x in probes):
                out.append({"kind": "outside-target", "config": config, "piece": i})
    return out


def check_dissection(D: HingedDissection, net_A: Net, net_B: Net):
    total = D.total_area()
    for net in (net_A, net_B):
        if abs(net.area - total) > 1e-9 * total:
            raise InvariantError("piece areas do not add up to the net area")
    for config, net in (("A", net_A), ("B", net_B)):
        bad = tiling_defects(D, config, net.boundary)
        if bad:
            raise InvariantError(f"configuration {config} does not tile its net: {bad[0]}")


# ---------------------------------------------------------------------------
# hinge angles


@dataclass
class HingeAngles:
    alpha: list
    alpha_prime: list
    beta: list
    reference: list             # per hinge: interior bisector points (v-, v+), piece-local

    def glued_angle(self, j):
        return self.alpha[j] + geom.TWO_PI - self.alpha_prime[j]


def _corner_bisector(poly, k, dist):
    v, nxt, prv = poly[k], poly[(k + 1) % len(poly)], poly[k - 1]
    theta = geom.ccw_angle(v, nxt, prv)
    d = geom.rotate(geom.unit(geom.sub(nxt, v)), 0.5 * theta)
    dist = min(dist, 0.25 * geom.dist(v, nxt), 0.25 * geom.dist(v, prv))
    return geom.add(v, geom.scale(d, dist))


def reference_points(D: HingedDissection, j, dist=None):
    """v- and v+ on the interior bisectors of the hinge corners of the previous
    and next piece (piece-local coordinates)."""
    hg = D.hinges[j]
    if dist is None:
        eps = (D.provenance or {}).get("epsilon")
        dist = eps / 2 if eps else math.inf
    vm = _corner_bisector(D.pieces[hg.prev_piece], hg.prev_corner, dist)
    vp = _corner_bisector(D.pieces[hg.next_piece], hg.next_corner, dist)
    return vm, vp


def _config_angle(D, j, config, vm, vp):
    hg = D.hinges[j]
    pl = D.placement_A if config == "A" else D.placement_B
    v = pl[hg.next_piece].apply(D.pieces[hg.next_piece][hg.next_corner])
    return geom.ccw_angle(v, pl[hg.next_piece].apply(vp), pl[hg.prev_piece].apply(vm), D.tol)


def _corner(poly, k):
    return geom.ccw_angle(poly[k], poly[(k + 1) % len(poly)], poly[k - 1])


def hinge_angles(D: HingedDissection) -> HingeAngles:
    """Angles at every hinge with v- on the far boundary edge of the previous
    piece and v+ on the near boundary edge of the next one.

    alpha is swept counterclockwise from v+ to v- in configuration A, alpha'
    the same in B, beta the surface angle from v- to v+ on the other side
    (2 pi - alpha' when the source surface is unknown). The sweeps are measured
    between interior bisector points and then widened by half of each hinge
    corner: boundary rays of the two pieces can coincide, bisectors cannot.
    """
    al, alp, be, refs = [], [], [], []
    prov = D.provenance or {}
    for j, hg in enumerate(D.hinges):
        vm, vp = reference_points(D, j)
        half = 0.5 * (_corner(D.pieces[hg.prev_piece], hg.prev_corner)
                      + _corner(D.pieces[hg.next_piece], hg.next_corner))
        a = _config_angle(D, j, "A", vm, vp) + half
        ap = _config_angle(D, j, "B", vm, vp) + half
        if "directions" in prov:
            d_in, d_out = prov["directions"][j]
            b = wedge_angle(prov["P"], hg.vertex, d_in, d_out, "left") - half
        else:
            b = geom.TWO_PI - ap
        al.append(a)
        alp.append(ap)
        be.append(b)
        refs.append((vm, vp))
    return HingeAngles(al, alp, be, refs)


# ---------------------------------------------------------------------------
# contacts and classification


@dataclass(frozen=True)
class Contact:
    """Edge ``e`` of piece ``p`` glued to edge ``f`` of piece ``q`` over
    ``[s0, s1]`` (arc length along e from its start); ``t0, t1`` are the
    matching arc lengths along f (t0 pairs with s0)."""

    p: int
    e: int
    q: int
    f: int
    s0: float
    s1: float
    t0: float
    t1: float


def piece_edges(D: HingedDissection, config):
    out = []
    for i in range(D.n):
        pts = D.placed(i, config)
        m = len(pts)
        for k in range(m):
            out.append((i, k, pts[k], pts[(k + 1) % m]))
    return out


def contacts(D: HingedDissection, config, tol=None):
    """All collinear, opposite-direction overlaps between placed piece edges."""
    tol = tol or D.tol
    eps = tol.absolute_eps
    edges = piece_edges(D, config)
    out = []
    for x in range(len(edges)):
        p, e, a, b = edges[x]
        L = geom.dist(a, b)
        d = geom.unit(geom.sub(b, a))
        for y in range(len(edges)):
            q, f, c, dd = edges[y]
            if x == y:
                continue
            u = geom.sub(dd, c)
            if geom.dot(d, u) >= 0:
                continue
            if abs(geom.cross(d, geom.sub(c, a))) > eps or abs(geom.cross(d, geom.sub(dd, a))) > eps:
                continue
            sc, sd = geom.dot(geom.sub(c, a), d), geom.dot(geom.sub(dd, a), d)
            s0, s1 = max(0.0, sd), min(L, sc)
            if s1 - s0 <= eps:
                continue
            M = geom.dist(c, dd)
            out.append(Contact(p, e, q, f, s0, s1, min(M, max(0.0, sc - s0)), min(M, max(0.0, sc - s1))))
    return out


def _coverage(D, config, tol):
    cov = {}
    for ct in contacts(D, config, tol):
        cov.setdefault((ct.p, ct.e), []).append((ct.s0, ct.s1, ct))
    return cov


def edge_lengths(D):
    return {(i, k): geom.dist(D.pieces[i][k], D.pieces[i][(k + 1) % len(D.pieces[i])])
            for i in range(D.n) for k in range(len(D.pieces[i]))}


def coverage_defects(D: HingedDissection, tol=None):
    """Sub-intervals of piece edges glued in neither or both configurations."""
    tol = tol or D.tol
    eps = tol.absolute_eps
    covA, covB = _coverage(D, "A", tol), _coverage(D, "B", tol)
    out = []
    for key, L in sorted(edge_lengths(D).items()):
        ivs = [(s0, s1, "A", ct) for s0, s1, ct in covA.get(key, [])] + \
              [(s0, s1, "B", ct) for s0, s1, ct in covB.get(key, [])]
        cuts = sorted({0.0, L, *(s for iv in ivs for s in iv[:2])})
        merged = [cuts[0]]
        for s in cuts[1:]:
            if s - merged[-1] > eps:
                merged.append(s)
        merged[-1] = L
        for s0, s1 in zip(merged, merged[1:]):
            mid = 0.5 * (s0 + s1)
            hits = [iv for iv in ivs if iv[0] - eps <= mid <= iv[1] + eps]
            if len(hits) != 1:
                out.append({"piece": key[0], "edge": key[1], "interval": [s0, s1],
                            "glued": sorted(h[2] for h in hits),
                            "partners": sorted({(h[3].q, h[3].f) for h in hits})})
    return out


def hinge_on_boundary(D: HingedDissection, j, config, tol=None):
    """True if the hinge point is an endpoint of an unglued stretch of a piece edge."""
    tol = tol or D.tol
    eps = tol.absolute_eps
    cov = _coverage(D, config, tol)
    lens = edge_lengths(D)
    hg = D.hinges[j]
    for i, k in ((hg.prev_piece, hg.prev_corner), (hg.next_piece, hg.next_corner)):
        m = len(D.pieces[i])
        for e, s in ((k, 0.0), ((k - 1) % m, lens[(i, (k - 1) % m)])):
            glued = any(s0 - eps <= s <= s1 + eps for s0, s1, _ in cov.get((i, e), []))
            if not glued:
                return True
    return False


@dataclass
class Classification:
    reversible: bool
    monotone: bool
    simple: bool
    witness: dict

    def to_json(self):
        return {"reversible": self.reversible, "monotone": self.monotone,
                "simple": self.simple, "witness": self.witness}


def hinge_touches(D: HingedDissection, j, config, tol=None):
    """Pieces other than the two hinged ones that touch hinge ``j``."""
    tol = tol or D.tol
    hg = D.hinges[j]
    x = D.hinge_point(j, config)
    out = []
    for i in range(D.n):
        if i in (hg.prev_piece, hg.next_piece):
            continue
        poly = D.placed(i, config)
        if geom.point_in_polygon(x, poly, tol) >= 0 or \
                geom.polygon_boundary_distance(x, poly) <= tol.absolute_eps:
            out.append(i)
    return out


def classify(D: HingedDissection, angles: HingeAngles = None) -> Classification:
    angles = angles or hinge_angles(D)
    tol = D.tol
    witness = {}
    defects = coverage_defects(D)
    off_boundary = [(j, c) for j in range(len(D.hinges)) for c in "AB"
                    if not hinge_on_boundary(D, j, c)]
    reversible = not defects and not off_boundary
    if not reversible:
        witness["reversible"] = {"edges": defects[:5],
                                 "hinges_off_boundary": [list(x) for x in off_boundary]}
    bad = [j for j in range(len(D.hinges)) if angles.alpha_prime[j] < angles.alpha[j] - tol.angle_eps]
    monotone = not bad
    if bad:
        witness["monotone"] = {"hinges": bad}
    touching = []
    if reversible:
        for j in range(len(D.hinges)):
            for c in "AB":
                for i in hinge_touches(D, j, c):
                    touching.append({"hinge": j, "config": c, "piece": i})
    simple = reversible and not touching
    if not simple:
        witness["simple"] = {"touches": touching[:5]} if reversible else {"reason": "not reversible"}
    if simple and not monotone:
        raise InvariantError("simple dissection classified as not monotone")
    return Classification(reversible, monotone, simple, witness)
