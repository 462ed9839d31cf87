import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from negcurv.complex import check_link_condition, euler_characteristic, triangle_corner_angles, validate
from negcurv.geodesics import ClosedLoop, LoopError, conjugate_or_inverse_conjugate, is_closed_geodesic, is_proper_power
from negcurv.hypgeom import FinSpec, fin_third_side
from negcurv.recipes import rose, word_loop
from negcurv.transverse import (
    FullOverlap,
    TransversalityProblem,
    find_branch,
    glue_fin,
    intersection_count,
    retract,
    rewrite_pair,
    same_cyclic,
    transversalize,
)


def run(words, rank=2, lengths=None):
    K = rose(rank, lengths)
    loops = [word_loop(w) for w in words]
    return K, loops, transversalize(TransversalityProblem(K, loops))


def assert_transverse(K, loops, res):
    assert res.final_count == 0
    assert intersection_count(res.loops, res.complex) == 0
    assert euler_characteristic(res.complex) == euler_characteristic(K)
    assert res.iterations <= res.initial_count
    assert validate(res.complex).ok
    assert check_link_condition(res.complex).passed
    for old, new in zip(loops, res.loops):
        assert is_closed_geodesic(res.complex, new).ok
        assert same_cyclic(retract(new, res.retraction), old)


def test_intersection_count():
    K = rose(2)
    assert intersection_count([word_loop("ab")], K) == 0
    assert intersection_count([word_loop("abaB")], K) == 2
    assert intersection_count([word_loop("ab"), word_loop("aB")], K) == 2


@pytest.mark.parametrize(
    "words,rank",
    [(["abaB"], 2), (["ab", "aB"], 2), (["ab", "aab"], 2), (["aB", "abAB"], 2), (["abc", "acb", "aBc"], 3)],
)
def test_transversalize_examples(words, rank):
    K, loops, res = run(words, rank)
    assert_transverse(K, loops, res)


def test_single_loop_fin_record():
    K, loops, res = run(["abaB"])
    assert res.initial_count == 2 and res.iterations == 1
    rec = res.fins[0]
    e, f = rec.host_edges
    assert rec.apex == K.edge(e).dst
    assert len(res.loops[0]) == 3 and rec.new_edge in res.loops[0].edges
    assert res.retraction[rec.new_edge] == (e, f)
    assert rec.apex_angle == pytest.approx(math.pi - rec.delta)
    assert rec.k < 0


def test_already_transverse_is_untouched():
    K, loops, res = run(["ab"])
    assert res.iterations == 0 and res.complex is K


@pytest.mark.parametrize(
    "words,kind",
    [(["ab", "ab"], "common power"), (["abab"], "proper power"), (["ab", "abab"], "common power")],
)
def test_full_overlap(words, kind):
    K = rose(2)
    loops = [word_loop(w) for w in words]
    with pytest.raises(FullOverlap) as info:
        find_branch(K, loops)
    assert info.value.witness["kind"] == kind
    with pytest.raises(FullOverlap):
        transversalize(TransversalityProblem(K, loops))


def test_non_geodesic_input_rejected(pillow):
    with pytest.raises(LoopError):
        transversalize(TransversalityProblem(pillow, [ClosedLoop(("p", "q", "r"))]))


@pytest.mark.parametrize("delta,k", [(0.3, -1.0), (1.2, -0.25), (0.05, -3.0)])
def test_glue_fin_geometry(delta, k):
    K = rose(2, [1.0, 2.0])
    G, rec = glue_fin(K, "a", "b", delta, k)
    assert rec.new_length == fin_third_side(FinSpec(1.0, math.pi - delta, 2.0, k))
    angles = triangle_corner_angles(G, rec.triangle)
    # apex sits at the head of the first side
    assert angles[0] == pytest.approx(math.pi - delta, abs=1e-9)
    assert euler_characteristic(G) == euler_characteristic(K)
    with pytest.raises(ValueError):
        glue_fin(K, "a", "b", 0.0, k)


def test_rewrite_and_retract():
    rev = {"a": "A", "b": "B", "f": "F"}
    loop = ClosedLoop(("b", "a", "c", "a"))
    out = rewrite_pair(loop, "a", "b", "f", rev)
    assert same_cyclic(out, ClosedLoop(("f", "a", "c")))
    back = ClosedLoop(("c", "B", "A"))
    assert rewrite_pair(back, "a", "b", "f", rev).edges == ("c", "F")
    assert rewrite_pair(back, "a", "b", "f").edges == back.edges
    assert same_cyclic(retract(out, {"f": ("a", "b")}), loop)


def malnormal(words):
    if any(is_proper_power(tuple(w)) for w in words):
        return False
    return not any(
        conjugate_or_inverse_conjugate(tuple(u), tuple(v)) for i, u in enumerate(words) for v in words[i + 1 :]
    )


def reduced(s):
    n = len(s)
    return n > 0 and all(s[(i + 1) % n] != s[i].swapcase() for i in range(n))


words3 = st.text("abcABC", min_size=1, max_size=5).filter(reduced)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(st.lists(words3, min_size=1, max_size=3))
def test_transversalize_random_families(words):
    K = rose(3)
    loops = [word_loop(w) for w in words]
    if not malnormal(words):
        with pytest.raises(FullOverlap):
            transversalize(TransversalityProblem(K, loops))
        return
    res = transversalize(TransversalityProblem(K, loops))
    assert_transverse(K, loops, res)
