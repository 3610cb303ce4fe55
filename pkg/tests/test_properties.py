import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hingeforge import samples
from hingeforge.dissect import build_dissection, classify, hinge_angles
from hingeforge.errors import NotANetError
from hingeforge.glue import roundtrip_check
from hingeforge.noncross import tree_from_dict
from conftest import random_sweep


def built_cases():
    return [c for c in random_sweep() if c["result"] is not None]


def test_enough_random_dissections():
    cases = built_cases()
    assert len(cases) >= 100
    kinds = {c["kind"] for c in cases}
    assert kinds == {"box", "dc_polygon", "octahedron", "saddle"}


def test_simple_implies_monotone():
    for c in built_cases():
        cl = c["class"]
        assert not (cl.simple and not cl.monotone)


def test_convex_inputs_are_monotone_and_alexandrov():
    for c in built_cases():
        convex = c["kind"] != "saddle"
        if convex:
            assert c["class"].monotone and c["alexandrov"].convex
        else:
            # both apexes of the saddle carry more than 2 pi
            assert not c["alexandrov"].convex


def test_random_metrics_close_up():
    for c in built_cases():
        assert abs(c["residual"]) <= 1e-6
        assert c["metric"].euler_characteristic() == 2
        P = c["P"]
        got = {k.label: k.angle for k in c["metric"].classes if k.label is not None}
        assert got == pytest.approx({v: P.cone_angle(v) for v in range(P.n_vertices)}, abs=1e-9)


def test_random_angle_identities():
    for c in built_cases():
        D, H, P = c["result"].D, c["angles"], c["P"]
        for j, hg in enumerate(D.hinges):
            assert H.alpha[j] + H.beta[j] == pytest.approx(P.cone_angle(hg.vertex), abs=1e-9)
            assert H.alpha_prime[j] + H.beta[j] == pytest.approx(2 * math.pi, abs=1e-9)
            assert H.glued_angle(j) == pytest.approx(P.cone_angle(hg.vertex), abs=1e-9)


def test_random_areas():
    for c in built_cases():
        R, P = c["result"], c["P"]
        for net in (R.net_A, R.net_B):
            assert net.area == pytest.approx(P.surface_area(), rel=1e-9)
        assert R.D.total_area() == pytest.approx(P.surface_area(), rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 9), st.integers(0, 2**32 - 1))
def test_doubly_covered_polygons_round_trip(n, seed):
    P, a, b = samples.doubly_covered(samples.convex_polygon(np.random.default_rng(seed), n))
    rep = roundtrip_check(P, tree_from_dict(P, a), tree_from_dict(P, b))
    assert rep.ok and rep.convex


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.2, 3))
def test_boxes_are_monotone(dx, dy, dz):
    P, a, b = samples.box(dx, dy, dz)
    try:
        R = build_dissection(P, tree_from_dict(P, a), tree_from_dict(P, b))
    except NotANetError:
        return
    assert classify(R.D, hinge_angles(R.D)).monotone
