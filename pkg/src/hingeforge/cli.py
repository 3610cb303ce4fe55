"""Command-line pipeline: validate, cycle, dissect, glue.

Exit codes: 0 ok, 1 domain failure, 2 format error, 3 internal invariant
violation. Failures print one ``error[<stage>]: <message>`` line on stderr;
the JSON report on stdout (when one is produced) carries the same stage tag.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .cycle import build_separating_cycle, build_union_graph, forced_vertex_order, same_cyclic_order
from .dissect import build_dissection, classify, hinge_angles
from .errors import FormatError, HingeForgeError, InvariantError
from .glue import check_alexandrov, gauss_bonnet_check, glue_metric
from .noncross import check_noncrossing, load_tree, validate_tree
from .render import RenderOptions, render_svg
from .surface import load_polyhedron

COMMANDS = ("validate", "cycle", "dissect", "glue")


@dataclass
class JobConfig:
    command: str
    mesh: Path = None
    tree_a: Path = None
    tree_b: Path = None
    dissection: Path = None
    tolerance: float = 1e-9         # relative to the mesh bounding-box diagonal
    angle_tolerance: float = 1e-9
    out: Path = None
    svg: bool = False
    overlay_cycle: bool = False
    inputs: list = field(default_factory=list)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise FormatError(f"unknown command {self.command!r}")
        self.inputs = [self.dissection] if self.command == "glue" else [self.mesh, self.tree_a, self.tree_b]
        for p in self.inputs:
            if p is None or not Path(p).is_file():
                raise FormatError(f"input file not found: {p}")
        if not (self.tolerance > 0 and self.angle_tolerance > 0):
            raise FormatError("tolerances must be positive")


def _read(path):
    try:
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def _load_inputs(cfg: JobConfig):
    P = load_polyhedron(_read(cfg.mesh), cfg.tolerance, cfg.angle_tolerance)
    return P, load_tree(P, _read(cfg.tree_a)), load_tree(P, _read(cfg.tree_b))


def _write(cfg: JobConfig, name, text):
    if cfg.out is None:
        return
    Path(cfg.out).mkdir(parents=True, exist_ok=True)
    (Path(cfg.out) / name).write_text(text)


def cmd_validate(cfg: JobConfig):
    P, A, B = _load_inputs(cfg)
    ra, rb = validate_tree(P, A), validate_tree(P, B)
    report = {"command": "validate", "ok": False, "tree_A": ra.to_json(), "tree_B": rb.to_json(),
              "noncrossing": None}
    if ra.ok and rb.ok:
        nc = check_noncrossing(P, A, B)
        report["noncrossing"] = nc.to_json(P)
        report["ok"] = nc.ok
        if not nc.ok:
            report["stage"] = "noncross"
    else:
        report["stage"] = "validate"
    return (0 if report["ok"] else 1), report


def cmd_cycle(cfg: JobConfig):
    P, A, B = _load_inputs(cfg)
    G = build_union_graph(P, A, B)
    C = build_separating_cycle(P, A, B, G)
    forced = forced_vertex_order(G)
    if not same_cyclic_order(C.vertex_order, forced):
        raise InvariantError("separating cycle order differs from the forced order", stage="cycle")
    report = {"command": "cycle", "ok": True, "vertex_order": C.vertex_order, "forced_order": forced,
              "clearance": {"alpha": C.clearance.alpha, "epsilon": C.clearance.epsilon,
                            "offset": C.clearance.offset, "radius": C.clearance.radius},
              "curve": {"points": [p.to_json(P) for p in C.curve.points],
                        "carrier_faces": list(C.curve.carriers)}}
    _write(cfg, "cycle.json", io.dumps(report))
    if cfg.svg:
        from .dissect import unfold_subdivision
        from .cycle import T1
        net = unfold_subdivision(G.S, T1)
        _write(cfg, "cycle.svg", render_svg(net, cycle=C, opts=RenderOptions(overlay_cycle=True),
                                            title="separating cycle"))
    return 0, report


def cmd_dissect(cfg: JobConfig):
    P, A, B = _load_inputs(cfg)
    R = build_dissection(P, A, B)
    H = hinge_angles(R.D)
    cls = classify(R.D, H)
    dj = io.dissection_to_json(R.D)
    report = {"command": "dissect", "ok": True, "pieces": R.D.n,
              "hinge_order": [h.vertex for h in R.D.hinges],
              "area": {"surface": P.surface_area(), "net_A": R.net_A.area, "net_B": R.net_B.area,
                       "pieces": R.D.total_area()},
              "perimeter": {"net_A": R.net_A.perimeter, "net_B": R.net_B.perimeter,
                            "cut_A": R.net_A.cut_length, "cut_B": R.net_B.cut_length},
              "hinge_angles": {"alpha": H.alpha, "alpha_prime": H.alpha_prime, "beta": H.beta},
              "classification": cls.to_json()}
    _write(cfg, "dissection.json", io.dumps(dj))
    _write(cfg, "report.json", io.dumps(report))
    if cfg.svg:
        opts = RenderOptions(overlay_cycle=cfg.overlay_cycle)
        _write(cfg, "net_A.svg", render_svg(R.net_A, R.D, "A", R.cycle, opts, "configuration A"))
        _write(cfg, "net_B.svg", render_svg(R.net_B, R.D, "B", None, opts, "configuration B"))
    return 0, report


def cmd_glue(cfg: JobConfig):
    D = io.load_dissection(_read(cfg.dissection), angle_tolerance=cfg.angle_tolerance)
    H = hinge_angles(D)
    M = glue_metric(D, H)
    alex = check_alexandrov(M)
    res = gauss_bonnet_check(M)
    report = {"command": "glue", "ok": abs(res) <= 1e-6, **io.metric_to_json(M, alex, res),
              "classification": classify(D, H).to_json()}
    if not report["ok"]:
        raise InvariantError(f"Gauss-Bonnet residual {res}", stage="glue")
    _write(cfg, "metric.json", io.dumps(report))
    return 0, report


HANDLERS = {"validate": cmd_validate, "cycle": cmd_cycle, "dissect": cmd_dissect, "glue": cmd_glue}


def build_parser():
    ap = argparse.ArgumentParser(prog="hingeforge", description="Hinged dissections from non-crossing nets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="length tolerance, relative to the mesh bounding-box diagonal (default 1e-9)")
    common.add_argument("--angle-tolerance", type=float, default=1e-9, help="angle tolerance in radians")
    common.add_argument("--out", type=Path, help="directory for JSON/SVG outputs")
    common.add_argument("--svg", action="store_true", help="also write SVG drawings (needs --out)")
    common.add_argument("--overlay-cycle", action="store_true", help="draw the separating cycle on net A")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "cycle", "dissect"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("mesh", type=Path)
        p.add_argument("tree_a", type=Path)
        p.add_argument("tree_b", type=Path)
    p = sub.add_parser("glue", parents=[common])
    p.add_argument("dissection", type=Path)
    return ap


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(args.command, getattr(args, "mesh", None), getattr(args, "tree_a", None),
                        getattr(args, "tree_b", None), getattr(args, "dissection", None),
                        args.tolerance, args.angle_tolerance, args.out, args.svg, args.overlay_cycle)
        code, report = HANDLERS[args.command](cfg)
    except HingeForgeError as exc:
        stage = exc.stage or args.command
        stderr.write(f"error[{stage}]: {exc}\n")
        stdout.write(io.dumps({"command": args.command, "ok": False, "stage": stage,
                               "error": type(exc).__name__, "message": str(exc)}))
        return exc.exit_code
    except Exception as exc:  # anything unexpected is an internal invariant failure
        stderr.write(f"error[internal]: {type(exc).__name__}: {exc}\n")
        return InvariantError.exit_code
    stdout.write(io.dumps(report))
    if code:
        stderr.write(f"error[{report.get('stage', args.command)}]: validation failed\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
