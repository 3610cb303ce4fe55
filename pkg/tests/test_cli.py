import io as _io
import json

import pytest

from hingeforge import cli, io
from hingeforge.dissect import hinge_angles
from hingeforge.errors import FormatError, InvariantError
from hingeforge.glue import check_alexandrov, glue_metric
from hingeforge.render import render_svg, RenderOptions
from conftest import ALL_POSITIVE, FIXTURES, built, paths


def run(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, json.loads(out.getvalue()) if out.getvalue() else None, err.getvalue()


def test_validate_ok():
    code, rep, _ = run("validate", *paths("cube"))
    assert code == 0 and rep["ok"]


@pytest.mark.parametrize("name, kind", [("cube_crossing", "proper-cross"),
                                        ("cube_interleaved", "interleaved-at-vertex")])
def test_validate_lists_violation(name, kind):
    code, rep, err = run("validate", *paths(name))
    assert code == 1 and not rep["ok"]
    assert kind in [v["kind"] for v in rep["noncrossing"]["violations"]]
    assert "error[noncross]" in err


def test_malformed_mesh_exit_2(tmp_path):
    bad = tmp_path / "bad.off"
    bad.write_text("OFF\n3 1 0\n0 0 0\n1 0 0\n")
    _, a, b = paths("cube")
    code, rep, err = run("validate", bad, a, b)
    assert code == 2 and rep["stage"] in ("format", "load")
    assert err.startswith("error[")


def test_missing_input_exit_2(tmp_path):
    code, _, _ = run("dissect", tmp_path / "nope.off", tmp_path / "a.json", tmp_path / "b.json")
    assert code == 2


def test_cycle_orders():
    code, rep, _ = run("cycle", *paths("cube"))
    assert code == 0 and sorted(rep["vertex_order"]) == list(range(8))
    code, rep, _ = run("cycle", *paths("dc_triangle"))
    assert code == 0 and len(rep["vertex_order"]) == 3


def test_cycle_invalid_pair_has_stage():
    code, rep, err = run("cycle", *paths("cube_interleaved"))
    assert code == 1 and rep["stage"] == "noncross" and "error[noncross]" in err


@pytest.mark.parametrize("name, stage", [("cube_crossing", "noncross"), ("cube_interleaved", "noncross"),
                                         ("cube_nonspanning", "validate"), ("saddle_overlap", "unfold")])
def test_dissect_negative_stages(name, stage):
    code, rep, _ = run("dissect", *paths(name))
    assert code == 1 and rep["stage"] == stage


@pytest.mark.parametrize("name", ALL_POSITIVE)
def test_glue_composes_with_dissect(tmp_path, name):
    code, rep, _ = run("dissect", *paths(name), "--out", tmp_path)
    assert code == 0
    code, metric, _ = run("glue", tmp_path / "dissection.json")
    assert code == 0 and abs(metric["gauss_bonnet_residual"]) <= 1e-6
    assert metric["alexandrov"]["convex"] == (name != "saddle")


def test_cube_dissect_report(tmp_path):
    code, rep, _ = run("dissect", *paths("cube"), "--out", tmp_path)
    assert rep["area"]["pieces"] == pytest.approx(6)
    assert rep["classification"]["monotone"] is True


def test_dc_triangle_monotone():
    code, rep, _ = run("dissect", *paths("dc_triangle"))
    assert code == 0 and rep["classification"]["monotone"] is True


def test_glue_rejects_perturbed_dissection(tmp_path):
    run("dissect", *paths("cube"), "--out", tmp_path)
    data = json.loads((tmp_path / "dissection.json").read_text())
    x, y = data["pieces"][0][1]
    data["pieces"][0][1] = [x, y + 1e-3]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, rep, err = run("glue", bad)
    assert code == 1 and rep["error"] == "GluingError"


def test_internal_errors_exit_3(monkeypatch):
    def boom(cfg):
        raise InvariantError("broken")
    monkeypatch.setitem(cli.HANDLERS, "validate", boom)
    code, rep, _ = run("validate", *paths("cube"))
    assert code == 3


def test_dissect_is_byte_deterministic(tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        assert run("dissect", *paths("cube"), "--out", d, "--svg", "--overlay-cycle")[0] == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"dissection.json", "report.json", "net_A.svg", "net_B.svg"}


def test_svg_structure():
    R = built("cube")
    plain = render_svg(R.net_A)
    assert plain.count('id="net-outline"') == 1 and 'id="tree-image"' in plain
    assert "separating-cycle" not in plain
    over = render_svg(R.net_A, R.D, "A", R.cycle, RenderOptions(overlay_cycle=True))
    assert over.count('id="separating-cycle"') == 1
    assert over.count("<path id=\"piece-") == R.D.n


def test_canonical_numbers():
    assert io.canonical(-0.0) == 0.0 and str(io.canonical(-0.0)) == "0.0"
    assert io.canonical(1 / 3) == 0.333333333333
    assert io.canonical({"a": (1, 2.0)}) == {"a": [1, 2.0]}


def test_interchange_roundtrip():
    D = built("saddle").D
    text = io.dumps(io.dissection_to_json(D))
    D2 = io.load_dissection(text)
    assert io.dumps(io.dissection_to_json(D2)) == text
    assert list(json.loads(text)) == ["pieces", "hinges", "placement_A", "placement_B", "corner_labels", "meta"]
    assert not check_alexandrov(glue_metric(D2, hinge_angles(D2))).convex


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("pieces"),
    lambda d: d["pieces"].__setitem__(0, [[0, 0]]),
    lambda d: d["hinges"][0].__setitem__("next_corner", 99),
    lambda d: d["placement_A"].pop(),
    lambda d: d["placement_B"][0].__setitem__("rotation", "x"),
    lambda d: d.__setitem__("corner_labels", [[]]),
])
def test_bad_interchange_is_format_error(mutate):
    data = json.loads(io.dumps(io.dissection_to_json(built("cube").D)))
    mutate(data)
    with pytest.raises(FormatError):
        io.dissection_from_json(data)
