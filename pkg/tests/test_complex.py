import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_force_systole, random_link_graph

from conftest import make_pillow
from negcurv.complex import (
    Arc,
    ComplexBuilder,
    LinkGraph,
    build_link,
    check_link_condition,
    corners,
    euler_characteristic,
    link_distance,
    require_valid,
    scale_metric,
    systole,
    triangle_corner_angles,
    validate,
    with_curvatures,
)
from negcurv.recipes import rose

EQUILATERAL_1 = 0.9187978721780274


def test_pillow_structure(pillow):
    assert validate(pillow).ok
    assert euler_characteristic(pillow) == 2
    assert pillow.kbar == -1.0
    for tid in pillow.triangles:
        assert triangle_corner_angles(pillow, tid) == pytest.approx((EQUILATERAL_1,) * 3, abs=1e-15)


def test_pillow_links_are_short_circles(pillow):
    rep = check_link_condition(pillow)
    assert not rep.passed
    assert rep.failing == ["x", "y", "z"]
    for v in "xyz":
        L = build_link(pillow, v)
        assert len(L.nodes) == 2 and len(L.arcs) == 2
        assert rep.systoles[v] == pytest.approx(2 * EQUILATERAL_1, abs=1e-14)
        assert rep.margins[v] < 0


def test_rose_passes_vacuously():
    K = rose(3)
    rep = check_link_condition(K)
    assert rep.passed and rep.systoles == {"v": math.inf}
    assert K.kbar is None
    assert euler_characteristic(K) == -2


def test_validate_reports_problems():
    b = ComplexBuilder()
    b.add_vertex("x")
    e, _ = b.add_edge("x", "y", 1.0)
    b.add_edge("x", "x", -1.0)
    b.add_triangle((e, e, e), -1.0)
    b.add_triangle(("nope", e, e), 0.5)
    diag = validate(b.build())
    assert not diag.ok
    text = " ".join(diag.problems)
    for needle in ("y", "length", "nope", "curvature"):
        assert needle in text
    with pytest.raises(ValueError):
        require_valid(b.build())


def test_unrealizable_triangle_is_diagnosed():
    b = ComplexBuilder()
    b.add_vertex("x")
    e1, _ = b.add_edge("x", "x", 1.0)
    e2, _ = b.add_edge("x", "x", 1.0)
    e3, E3 = b.add_edge("x", "x", 3.0)
    b.add_triangle((e1, e2, E3), -1.0)
    assert any("simplex" in p for p in validate(b.build()).problems)


def test_builder_rejects_duplicates():
    b = ComplexBuilder()
    b.add_vertex("x")
    with pytest.raises(ValueError):
        b.add_vertex("x")
    b.add_edge("x", "x", 1.0, eid="a", rev="A")
    with pytest.raises(ValueError):
        b.add_edge("x", "x", 1.0, eid="A")
    with pytest.raises(ValueError):
        b.add_edge("x", "x", 1.0, eid="c", rev="c")


def test_corners_cover_every_triangle_position(pillow):
    cs = corners(pillow)
    assert len(cs) == 6
    assert {c.vertex for c in cs} == {"x", "y", "z"}


def test_link_distance():
    L = LinkGraph(("a", "b", "c"), (Arc("a", "b", 1.0), Arc("b", "c", 2.0)))
    assert link_distance(L, "a", "a") == 0.0
    assert link_distance(L, "a", "c") == 3.0
    L2 = LinkGraph(("a", "b", "c"), (Arc("a", "b", 1.0),))
    assert link_distance(L2, "a", "c") == math.inf
    with pytest.raises(KeyError):
        link_distance(L, "a", "zz")


def test_systole_loop_and_parallel_arcs():
    assert systole(LinkGraph(("a",), (Arc("a", "a", 0.5),))) == 0.5
    L = LinkGraph(("a", "b"), (Arc("a", "b", 1.0), Arc("a", "b", 2.0), Arc("a", "b", 5.0)))
    assert systole(L) == 3.0
    assert systole(LinkGraph(("a", "b"), (Arc("a", "b", 1.0),))) == math.inf


@pytest.mark.parametrize("seed", range(40))
def test_systole_matches_brute_force(seed):
    L = random_link_graph(random.Random(seed))
    assert systole(L) == brute_force_systole(L)


@given(st.floats(0.05, 20.0))
def test_scale_metric_keeps_angles(s):
    K = make_pillow(0.7, -2.0)
    S = scale_metric(K, s)
    for tid in K.triangles:
        assert triangle_corner_angles(S, tid) == pytest.approx(triangle_corner_angles(K, tid), abs=1e-9)
    assert check_link_condition(S).passed == check_link_condition(K).passed


def test_scale_metric_rejects_nonpositive(pillow):
    with pytest.raises(ValueError):
        scale_metric(pillow, 0.0)


def test_with_curvatures(pillow):
    K = with_curvatures(pillow, 0.25)
    assert K.kbar == -0.25
    assert K.edges == pillow.edges
