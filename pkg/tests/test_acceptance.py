"""Acceptance criteria 1-9.

Each test prints one ``PASS``/``FAIL`` line with its runtime; the lines are
repeated in the terminal summary. Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import math
import random
from contextlib import contextmanager
from time import perf_counter

import pytest
from oracles import brute_force_systole, random_link_graph

from conftest import THREE_ROSES, make_pillow
from negcurv import io
from negcurv.annulus import annulus_complex, triangulate_annulus
from negcurv.comparison import comparison_complex, excess_angle
from negcurv.complex import (
    ComplexBuilder,
    check_link_condition,
    corners,
    euler_characteristic,
    scale_metric,
    systole,
)
from negcurv.geodesics import is_closed_geodesic
from negcurv.gluing import GEdge, GluingError, GraphOfSpaces, GVertex, glue, normalize
from negcurv.hypgeom import (
    GeometryError,
    annulus_params,
    critical_summit_angle,
    distance,
    lambert_quadrilateral,
    lambert_summit_angle,
    saccheri_vertices,
)
from negcurv.gluing import annulus_angle_sums
from negcurv.recipes import RecipeError, double, graph_of_roses, rose, word_loop
from negcurv.transverse import FullOverlap, TransversalityProblem, intersection_count, transversalize

TOL = 1e-9
TWO_PI = 2 * math.pi
RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = perf_counter() - start
        fast = elapsed < budget
        status = "PASS" if ok and fast else "FAIL"
        line = f"{status} criterion {number}: {title} ({elapsed:.3f}s of {budget:g}s)"
        RESULTS.append(line)
        print(line)
    assert fast, f"criterion {number} took {elapsed:.3f}s, budget {budget}s"


def test_lambert_identity():
    with criterion(1, "Lambert identity on a 20x20 grid", 1.0):
        worst = 0.0
        for i in range(20):
            c = 5.0 * (i + 1) / 20
            for j in range(20):
                a = c * (j + 0.5) / 20
                theta = lambert_summit_angle(a, c)
                worst = max(worst, abs(math.sin(theta) * math.cosh(c) - math.cosh(a)))
        assert worst <= TOL


def test_existence_boundary():
    with criterion(2, "Lambert existence boundary", 1.0):
        for c in (0.5, 1.0, 2.0, 4.0):
            crit = critical_summit_angle(c)
            with pytest.raises(GeometryError):
                lambert_quadrilateral(c, crit - 1e-6)
            q = lambert_quadrilateral(c, crit + 1e-3)
            assert 0 <= q.a < q.c


def test_annulus_contract():
    with criterion(3, "annulus contract on the theta x (A, C) grid", 5.0):
        for theta in (math.pi / 4, math.pi / 2, 3 * math.pi / 4):
            for A, C in ((1, 2), (2, 4), (0.5, 3)):
                spec = annulus_params(theta, A, C)
                assert spec.corner_angle > theta
                bl, br, tl, tr = saccheri_vertices(spec)
                assert abs(distance(bl, br) - A) <= TOL
                assert abs(distance(tl, tr) - C) <= TOL
                mesh = triangulate_annulus(spec, [C / 3] * 3, 2)
                assert abs(math.fsum(mesh.outer_lengths) - C) <= TOL
                assert abs(mesh.inner_length * mesh.degree - A) <= TOL
                K, _ = annulus_complex(mesh)
                assert check_link_condition(K, TOL).passed
                base, top = annulus_angle_sums(mesh)
                for s in base + top[1:]:
                    assert abs(s - math.pi) <= TOL
                assert abs(top[0] - spec.corner_angle) <= TOL


def single_triangle(a, b, c, k):
    bld = ComplexBuilder()
    for v in "xyz":
        bld.add_vertex(v)
    p, _ = bld.add_edge("x", "y", c)
    q, _ = bld.add_edge("y", "z", a)
    r, _ = bld.add_edge("z", "x", b)
    bld.add_triangle((p, q, r), k)
    return bld.build()


def test_comparison_monotonicity():
    rng = random.Random(20240601)
    triangles = []
    while len(triangles) < 1000:
        a, b, c = (rng.uniform(0.01, 6.0) for _ in range(3))
        if min(b + c - a, a + c - b, a + b - c) > 1e-6 * max(a, b, c):
            triangles.append(single_triangle(a, b, c, -rng.uniform(0.01, 10.0)))
    with criterion(4, "comparison angles grow on 1000 random triangles", 5.0):
        for K in triangles:
            before = {(c.triangle, c.position): c.angle for c in corners(K)}
            for factor in (0.9, 0.5, 0.1):
                pair = comparison_complex(K, factor)
                for c in corners(pair.compared):
                    assert c.angle > before[(c.triangle, c.position)]
                assert excess_angle(pair).delta > 0


def test_systole_oracle():
    rng = random.Random(7)
    graphs = [random_link_graph(rng, max_nodes=12) for _ in range(100)]
    with criterion(5, "edge-deletion systole equals brute-force cycle enumeration", 10.0):
        for L in graphs:
            assert systole(L) == brute_force_systole(L)


def test_transversalization():
    cases = [(2, ["abaB"]), (2, ["ab", "aB"]), (3, ["abc", "acb", "aBc"])]
    with criterion(6, "transversalization of rose loop families", 5.0):
        for rank, words in cases:
            K = rose(rank)
            loops = [word_loop(w) for w in words]
            res = transversalize(TransversalityProblem(K, loops))
            assert intersection_count(res.loops, res.complex) == 0
            assert euler_characteristic(res.complex) == euler_characteristic(K)
            assert all(is_closed_geodesic(res.complex, l, TOL).ok for l in res.loops)
            assert check_link_condition(res.complex, TOL).passed
            assert res.iterations <= res.initial_count
        for words in (["ab", "ab"], ["abab"]):
            with pytest.raises(FullOverlap):
                transversalize(TransversalityProblem(rose(2), [word_loop(w) for w in words]))


def test_end_to_end():
    with criterion(7, "glued double and three-rose graph are locally CAT(-1)", 30.0):
        for g, chi in ((double("abaB"), -2), (graph_of_roses(THREE_ROSES), None)):
            first = glue(g)
            second = glue(g)
            rep = check_link_condition(first.complex, TOL)
            assert rep.passed
            assert all(s >= TWO_PI - TOL for s in rep.systoles.values())
            aud = first.report["audit"]["euler"]
            assert aud["match"] and (chi is None or aud["actual"] == chi)
            assert first.complex.kbar < 0
            assert io.dumps(first.report) == io.dumps(second.report)
            assert io.dumps(io.complex_to_json(first.complex)) == io.dumps(io.complex_to_json(second.complex))


def test_negative_controls():
    with criterion(8, "negative controls are rejected", 1.0):
        rep = check_link_condition(make_pillow(), TOL)
        assert not rep.passed and rep.failing == ["x", "y", "z"]
        with pytest.raises(RecipeError, match="proper power"):
            double("abab")
        nn = GraphOfSpaces(
            {"w": GVertex("w", "N"), "z": GVertex("z", "N")},
            {
                "e": GEdge("e", "e~", "w", "z", "circle", degree=1),
                "e~": GEdge("e~", "e", "z", "w", "circle", degree=1),
            },
        )
        with pytest.raises(GluingError) as info:
            normalize(nn)
        assert info.value.stage == "normalize"


def test_rescaling_invariance(corpus):
    with criterion(9, "link verdict and corner angles are scale invariant", 5.0):
        for name, K in corpus.items():
            verdict = check_link_condition(K, TOL).passed
            angles = {(c.triangle, c.position): c.angle for c in corners(K)}
            scales = [0.5, 2.0] + ([math.sqrt(-K.kbar)] if K.kbar is not None else [])
            for s in scales:
                S = scale_metric(K, s)
                assert check_link_condition(S, TOL).passed == verdict, name
                for c in corners(S):
                    assert abs(c.angle - angles[(c.triangle, c.position)]) <= TOL, name


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
