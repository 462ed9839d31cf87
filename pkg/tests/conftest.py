import math

import pytest

from negcurv.complex import Complex, ComplexBuilder
from negcurv.gluing import glue
from negcurv.recipes import double, graph_of_roses, rose, word_loop
from negcurv.transverse import TransversalityProblem, transversalize

# u--v, v--x, x--u along pairwise distinct words, plus a point edge u--x
THREE_ROSES = {
    "roses": [{"id": "u", "rank": 2}, {"id": "v", "rank": 2}, {"id": "x", "rank": 2}],
    "edges": [
        {"from": "u", "to": "v", "word": "ab", "to_word": "aB"},
        {"from": "v", "to": "x", "word": "abAB", "to_word": "ab"},
        {"from": "x", "to": "u", "word": "aab", "to_word": "aaB"},
        {"from": "u", "to": "x", "point": True},
    ],
}


def make_pillow(side: float = 1.0, k: float = -1.0) -> Complex:
    """Two equilateral triangles glued along their boundaries: a sphere."""
    b = ComplexBuilder()
    for v in "xyz":
        b.add_vertex(v)
    p, P = b.add_edge("x", "y", side, eid="p")
    q, Q = b.add_edge("y", "z", side, eid="q")
    r, R = b.add_edge("z", "x", side, eid="r")
    b.add_triangle((p, q, r), k, tid="top")
    b.add_triangle((R, Q, P), k, tid="bottom")
    return b.build()


@pytest.fixture
def pillow():
    return make_pillow()


@pytest.fixture(scope="session")
def glued_double():
    return glue(double("abaB"))


@pytest.fixture(scope="session")
def glued_three_roses():
    return glue(graph_of_roses(THREE_ROSES))


@pytest.fixture(scope="session")
def corpus(glued_double, glued_three_roses):
    """Named complexes exercised by the whole-corpus properties."""
    from negcurv.annulus import standard_annulus

    rose2 = rose(2)
    tv = transversalize(TransversalityProblem(rose2, [word_loop("ab"), word_loop("aB")]))
    return {
        "pillow": make_pillow(),
        "thin_pillow": make_pillow(0.05, -4.0),
        "rose": rose(3, [1.0, 2.5, 0.25]),
        "annulus": standard_annulus(math.pi / 2, 2.0, 4.0)[0],
        "transversal_rose": tv.complex,
        "double": glued_double.complex,
        "three_roses": glued_three_roses.complex,
    }


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
