"""JSON formats: dissection interchange and reports.

All floats are written with 12 significant digits and ``-0.0`` becomes
``0.0``; dict field order is whatever the writer built, never sorted, so
output is byte-stable for identical inputs.
"""

from __future__ import annotations

import json
import math

from . import geom
from .dissect import Hinge, HingedDissection
from .errors import FormatError

DIGITS = 12


def canonical(x):
    """Recursively round floats and turn tuples into lists."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float) or hasattr(x, "__float__") and not hasattr(x, "__len__"):
        v = float(x)
        if not math.isfinite(v):
            raise ValueError(f"non-finite number {v}")
        v = float(f"{v:.{DIGITS}g}")
        return 0.0 if v == 0 else v
    if isinstance(x, dict):
        return {str(k): canonical(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [canonical(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(canonical(obj), indent=1) + "\n"


def _rigid_json(R: geom.Rigid):
    return {"rotation": R.theta, "translation": [R.tx, R.ty]}


def dissection_to_json(D: HingedDissection):
    out = {
        "pieces": [[list(p) for p in poly] for poly in D.pieces],
        "hinges": [{"vertex": h.vertex, "prev_piece": h.prev_piece, "prev_corner": h.prev_corner,
                    "next_piece": h.next_piece, "next_corner": h.next_corner, "active": h.active}
                   for h in D.hinges],
        "placement_A": [_rigid_json(R) for R in D.placement_A],
        "placement_B": [_rigid_json(R) for R in D.placement_B],
    }
    if D.corner_labels is not None:
        out["corner_labels"] = D.corner_labels
    out["meta"] = {"source": D.meta.get("source", "unknown"),
                   "tolerance": D.tol.absolute_eps, "angle_tolerance": D.tol.angle_eps}
    return out


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field '{key}'")
    val = obj[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise FormatError(f"{where}.{key}: expected a number")
        return float(val)
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise FormatError(f"{where}.{key}: expected an integer")
        return val
    if not isinstance(val, kind):
        raise FormatError(f"{where}.{key}: expected {kind.__name__}")
    return val


def _point(p, where):
    if not isinstance(p, list) or len(p) != 2 or any(
            isinstance(c, bool) or not isinstance(c, (int, float)) for c in p):
        raise FormatError(f"{where}: expected [x, y]")
    return (float(p[0]), float(p[1]))


def dissection_from_json(data, tolerance=None, angle_tolerance=None) -> HingedDissection:
    """Parse interchange JSON; command-line overrides beat the file's meta."""
    if not isinstance(data, dict):
        raise FormatError("dissection: expected an object")
    pieces = []
    for i, poly in enumerate(_need(data, "pieces", list, "dissection")):
        if not isinstance(poly, list) or len(poly) < 3:
            raise FormatError(f"pieces[{i}]: expected at least 3 points")
        pieces.append([_point(p, f"pieces[{i}]") for p in poly])
    n = len(pieces)
    if n == 0:
        raise FormatError("dissection has no pieces")
    hinges = []
    for j, h in enumerate(_need(data, "hinges", list, "dissection")):
        w = f"hinges[{j}]"
        hg = Hinge(_need(h, "vertex", int, w), _need(h, "prev_piece", int, w), _need(h, "prev_corner", int, w),
                   _need(h, "next_piece", int, w), _need(h, "next_corner", int, w),
                   bool(h.get("active", True)))
        for pi, ci in ((hg.prev_piece, hg.prev_corner), (hg.next_piece, hg.next_corner)):
            if not (0 <= pi < n and 0 <= ci < len(pieces[pi])):
                raise FormatError(f"{w}: piece/corner index out of range")
        hinges.append(hg)
    places = {}
    for key in ("placement_A", "placement_B"):
        rows = _need(data, key, list, "dissection")
        if len(rows) != n:
            raise FormatError(f"{key}: expected {n} placements")
        places[key] = []
        for i, r in enumerate(rows):
            w = f"{key}[{i}]"
            t = _point(_need(r, "translation", list, w), w + ".translation")
            places[key].append(geom.Rigid(_need(r, "rotation", float, w), t[0], t[1]))
    labels = data.get("corner_labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n or any(
                not isinstance(row, list) or len(row) != len(pieces[i]) for i, row in enumerate(labels)):
            raise FormatError("corner_labels: shape does not match pieces")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise FormatError("meta: expected an object")
    eps = tolerance if tolerance is not None else meta.get("tolerance", geom.DEFAULT_TOL.absolute_eps)
    aeps = angle_tolerance if angle_tolerance is not None else meta.get("angle_tolerance",
                                                                      geom.DEFAULT_TOL.angle_eps)
    try:
        tol = geom.Tolerance(float(eps), float(aeps))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"meta: bad tolerance ({exc})") from None
    return HingedDissection(pieces, hinges, places["placement_A"], places["placement_B"], labels,
                            {"source": str(meta.get("source", "external"))}, tol, None)


def load_dissection(text, tolerance=None, angle_tolerance=None) -> HingedDissection:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"dissection file is not JSON: {exc}") from None
    return dissection_from_json(data, tolerance, angle_tolerance)


def metric_to_json(M, alexandrov, residual):
    return {
        "classes": [{"label": c.label, "angle": c.angle, "corners": c.corners,
                     "edge_points": len(c.edge_points), "composition": c.composition}
                    for c in M.classes],
        "euler_characteristic": M.euler_characteristic(),
        "gauss_bonnet_residual": residual,
        "alexandrov": {"convex": alexandrov.convex, "witnesses": alexandrov.witnesses},
    }
