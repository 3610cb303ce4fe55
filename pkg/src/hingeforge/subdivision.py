"""Overlay of tree drawings on a polyhedron as a half-edge cell complex.

Every mesh face is split along the tree segments it carries; mesh edges are
split at tree points lying on them. The result is a sphere-like complex
whose 1-skeleton contains every tree edge, with every cell living in a
single face chart. Developments of regions (nets, pieces) are computed here.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from . import geom
from .errors import InvariantError
from .geom import Rigid
from .surface import EDGE, FACE, VERTEX, Polyhedron, SurfacePoint


@dataclass
class Cell:
    mesh_face: int
    halfedges: list


class Subdivision:
    def __init__(self, P: Polyhedron, trees):
        self.P = P
        self.trees = list(trees)
        self.points: list[SurfacePoint] = [P.vertex_point(v) for v in range(P.n_vertices)]
        self._edge_pts = {}   # mesh edge -> [(t, rid)]
        self._face_pts = {}   # mesh face -> [(xy, rid)]
        self.drawing_rid = []  # per tree: drawing-point id -> rid
        self.edge_labels = {}
        chords, along = {}, []
        for k, T in enumerate(self.trees):
            rids = {}
            for s in T.segments:
                rp, rq = self._rid(s.p), self._rid(s.q)
                rids[s.ids[0]], rids[s.ids[1]] = rp, rq
                if s.along is not None:
                    along.append((k, s.along, rp, rq))
                else:
                    key = ("C", s.carrier, min(rp, rq), max(rp, rq))
                    chords.setdefault(s.carrier, {}).setdefault(key, set()).add(k)
            self.drawing_rid.append(rids)
        self._build_cells(chords)
        for f_chords in chords.values():
            for key, labs in f_chords.items():
                self.edge_labels.setdefault(key, set()).update(labs)
        for k, e, r1, r2 in along:
            order = self.edge_order(e)
            i, j = sorted((order.index(r1), order.index(r2)))
            for a, b in zip(order[i:j], order[i + 1:j + 1]):
                self.edge_labels.setdefault(("E", e, min(a, b), max(a, b)), set()).add(k)
        self._check_topology()

    # refined vertices -------------------------------------------------------

    def _rid(self, p: SurfacePoint) -> int:
        P = self.P
        eps = P.tol.absolute_eps
        if p.kind == VERTEX:
            return p.ref
        if p.kind == EDGE:
            lst = self._edge_pts.setdefault(p.ref, [])
            L = P.edge_length(p.ref)
            for t, r in lst:
                if abs(t - p.params[0]) * L <= eps:
                    return r
            r = len(self.points)
            self.points.append(p)
            lst.append((p.params[0], r))
            return r
        xy = P.chart_point(p, p.ref)
        lst = self._face_pts.setdefault(p.ref, [])
        for q, r in lst:
            if geom.dist(q, xy) <= eps:
                return r
        r = len(self.points)
        self.points.append(p)
        lst.append((xy, r))
        return r

    def edge_order(self, e):
        """Refined vertices along mesh edge ``e`` from its lower endpoint."""
        a, b = self.P.edges[e]
        mids = [r for _, r in sorted(self._edge_pts.get(e, []))]
        return [a, *mids, b]

    def is_pvertex(self, r):
        return r < self.P.n_vertices

    # cells ----------------------------------------------------------------------

    def _build_cells(self, chords):
        P = self.P
        self.h_origin, self.h_dest, self.h_key, self.h_cell = [], [], [], []
        self.h_xy, self.h_next, self.h_prev = [], [], []
        self.cells: list[Cell] = []
        for f, fv in enumerate(P.faces):
            chart = P.charts[f]
            k = len(fv)
            xy = {}
            boundary, bedge = [], []
            for i in range(k):
                a, b = fv[i], fv[(i + 1) % k]
                e = P.edge_index[(a, b)]
                order = self.edge_order(e)
                if a > b:
                    order = order[::-1]
                ca, cb = chart[i], chart[(i + 1) % k]
                for r in order[:-1]:
                    bedge.append(e)
                    if r == a:
                        xy[r] = ca
                    else:
                        t = self.points[r].params[0]
                        xy[r] = geom.lerp(ca, cb, t if a < b else 1.0 - t)
                    boundary.append(r)
            for q, r in self._face_pts.get(f, []):
                xy[r] = q
            adj = {r: [] for r in xy}
            nb = len(boundary)
            for i in range(nb):
                a, b = boundary[i], boundary[(i + 1) % nb]
                key = ("E", bedge[i], min(a, b), max(a, b))
                adj[a].append((b, key))
                adj[b].append((a, key))
            for key in sorted(chords.get(f, {})):
                _, _, a, b = key
                adj[a].append((b, key))
                adj[b].append((a, key))
            self._trace_face(f, xy, adj)

    def _trace_face(self, f, xy, adj):
        ang = {}
        order = {}
        for u, nbrs in adj.items():
            lst = sorted(nbrs, key=lambda nk: (math.atan2(xy[nk[0]][1] - xy[u][1],
                                                          xy[nk[0]][0] - xy[u][0]), nk[1]))
            order[u] = lst
            ang[u] = {nk: i for i, nk in enumerate(lst)}
        used = set()
        outer = []
        for u in sorted(adj):
            for v, key in order[u]:
                if (u, v, key) in used:
                    continue
                cyc = []
                a, b, kk = u, v, key
                while (a, b, kk) not in used:
                    used.add((a, b, kk))
                    cyc.append((a, b, kk))
                    lst = order[b]
                    i = ang[b][(a, kk)]
                    a, (b, kk) = b, lst[i - 1]
                area = geom.signed_area([xy[c[0]] for c in cyc])
                if area > 0:
                    self._add_cell(f, cyc, xy)
                else:
                    outer.append(area)
        face_area = self.P.face_area(f)
        if len(outer) != 1 or abs(-outer[0] - face_area) > 1e-9 * max(face_area, 1.0):
            raise InvariantError(f"tree segments do not split face {f} into cells cleanly")

    def _add_cell(self, f, cyc, xy):
        c = len(self.cells)
        base = len(self.h_origin)
        m = len(cyc)
        hs = []
        for i, (a, b, key) in enumerate(cyc):
            self.h_origin.append(a)
            self.h_dest.append(b)
            self.h_key.append(key)
            self.h_cell.append(c)
            self.h_xy.append(xy[a])
            self.h_next.append(base + (i + 1) % m)
            self.h_prev.append(base + (i - 1) % m)
            hs.append(base + i)
        self.cells.append(Cell(f, hs))

    def _check_topology(self):
        index = {}
        for h in range(len(self.h_origin)):
            k = (self.h_key[h], self.h_origin[h], self.h_dest[h])
            if k in index:
                raise InvariantError(f"duplicate half-edge {k}")
            index[k] = h
        self.h_twin = []
        for h in range(len(self.h_origin)):
            t = index.get((self.h_key[h], self.h_dest[h], self.h_origin[h]))
            if t is None:
                raise InvariantError(f"half-edge {h} has no twin")
            self.h_twin.append(t)
        self.h_out = [[] for _ in self.points]
        for h in range(len(self.h_origin)):
            self.h_out[self.h_origin[h]].append(h)
        V, E, F = len(self.points), len(self.h_origin) // 2, len(self.cells)
        if V - E + F != 2:
            raise InvariantError(f"subdivision has V - E + F = {V - E + F}")
        for r in range(V):
            total = sum(self.corner_angle(h) for h in self.h_out[r])
            want = self.P.cone_angle(r) if self.is_pvertex(r) else geom.TWO_PI
            if abs(total - want) > 1e-7:
                raise InvariantError(f"angle sum {total} at refined vertex {r}, expected {want}")

    # queries ------------------------------------------------------------------

    @property
    def n_halfedges(self):
        return len(self.h_origin)

    def xy_dest(self, h):
        return self.h_xy[self.h_next[h]]

    def mesh_face(self, h):
        return self.cells[self.h_cell[h]].mesh_face

    def labels(self, h):
        return self.edge_labels.get(self.h_key[h], set())

    def in_tree(self, h, k):
        return k in self.edge_labels.get(self.h_key[h], ())

    def is_tree_edge(self, h):
        return bool(self.edge_labels.get(self.h_key[h]))

    def length(self, h):
        return geom.dist(self.h_xy[h], self.xy_dest(h))

    def corner_angle(self, h):
        """Interior angle of ``h``'s cell at the origin of ``h``."""
        if self.h_prev[h] == self.h_twin[h]:
            return geom.TWO_PI  # dangling chord end inside the cell
        return geom.ccw_angle(self.h_xy[h], self.xy_dest(h), self.h_xy[self.h_prev[h]], self.P.tol)

    def rotation(self, r):
        """Out half-edges at refined vertex ``r`` in counterclockwise order,
        each with its angular offset from the first."""
        start = min(self.h_out[r])
        out, h, acc = [], start, 0.0
        while True:
            out.append((h, acc))
            acc += self.corner_angle(h)
            h = self.h_twin[self.h_prev[h]]
            if h == start:
                break
        return out

    def direction(self, h):
        """Tangent direction of ``h`` at its origin as ``(mesh face, vector)``."""
        return self.mesh_face(h), geom.sub(self.xy_dest(h), self.h_xy[h])

    # regions ----------------------------------------------------------------------

    def components(self, crossable):
        """Connected groups of cells joined across half-edges where ``crossable``."""
        seen = [-1] * len(self.cells)
        comps = []
        for c0 in range(len(self.cells)):
            if seen[c0] >= 0:
                continue
            comp, queue = [], deque([c0])
            seen[c0] = len(comps)
            while queue:
                c = queue.popleft()
                comp.append(c)
                for h in self.cells[c].halfedges:
                    if crossable(h):
                        d = self.h_cell[self.h_twin[h]]
                        if seen[d] < 0:
                            seen[d] = len(comps)
                            queue.append(d)
            comps.append(sorted(comp))
        return comps

    def develop_region(self, cells, crossable, seed=None):
        """Lay out a flat region: cell -> Rigid mapping its mesh-face chart
        into one plane. Raises InvariantError if the layout is inconsistent."""
        cells = set(cells)
        seed = min(cells) if seed is None else seed
        place = {seed: Rigid()}
        queue = deque([seed])
        while queue:
            c = queue.popleft()
            T = place[c]
            for h in self.cells[c].halfedges:
                if not crossable(h):
                    continue
                t = self.h_twin[h]
                d = self.h_cell[t]
                if d in cells and d not in place:
                    place[d] = Rigid.align(self.h_xy[t], self.xy_dest(t),
                                           T.apply(self.xy_dest(h)), T.apply(self.h_xy[h]))
                    queue.append(d)
        if len(place) != len(cells):
            raise InvariantError("region is not connected")
        tol = 1e3 * self.P.tol.absolute_eps
        for c in cells:
            for h in self.cells[c].halfedges:
                t = self.h_twin[h]
                if crossable(h) and self.h_cell[t] in cells:
                    A, B = place[c], place[self.h_cell[t]]
                    if geom.dist(A.apply(self.h_xy[h]), B.apply(self.xy_dest(t))) > tol:
                        raise InvariantError("region development does not close up")
        return place

    def boundary_cycles(self, cells, crossable):
        """Boundary walks (counterclockwise, region on the left) of a region."""
        cells = set(cells)

        def on_boundary(h):
            return self.h_cell[h] in cells and not (crossable(h) and self.h_cell[self.h_twin[h]] in cells)

        todo = sorted(h for c in cells for h in self.cells[c].halfedges if on_boundary(h))
        seen, cycles = set(), []
        for h0 in todo:
            if h0 in seen:
                continue
            cyc, h = [], h0
            while h not in seen:
                seen.add(h)
                cyc.append(h)
                g = self.h_next[h]
                while not on_boundary(g):
                    g = self.h_next[self.h_twin[g]]
                h = g
            cycles.append(cyc)
        return cycles

    def placed(self, place, h):
        """Planar position of the origin of ``h`` under a region layout."""
        return place[self.h_cell[h]].apply(self.h_xy[h])

    def placed_dest(self, place, h):
        return place[self.h_cell[h]].apply(self.xy_dest(h))
