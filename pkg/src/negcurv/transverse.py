"""Make a family of closed geodesics pairwise transverse by gluing fins.

Each round passes to a comparison complex to open up an excess angle
``delta`` along the loops, finds two loops that run along a common edge
and then split, and glues a fin with apex angle ``pi - delta`` across the
split. Occurrences of the spanned two-edge path are rewritten to the new
third side of the fin, which lowers the overlap count by at least one.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from negcurv.comparison import DEFAULT_FACTOR, comparison_complex
from negcurv.complex import Complex, ComplexBuilder, _dijkstra, build_link, euler_characteristic
from negcurv.geodesics import ClosedLoop, LoopError, check_loop, is_closed_geodesic
from negcurv.hypgeom import TOL, FinSpec, fin_third_side

DELTA_CAP = math.pi / 2


class FullOverlap(ValueError):
    """Two relabellings of the loops agree forever: the family is not malnormal."""

    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass
class TransversalityProblem:
    complex: Complex
    loops: list[ClosedLoop]
    malnormal_attestation: str = "assumed"


@dataclass(frozen=True)
class Branch:
    gamma: tuple[str, ...]
    gamma_prime: tuple[str, ...]
    j: int
    loops: tuple[int, int]

    @property
    def host_edges(self) -> tuple[str, str]:
        """Shared edge ``e_j`` and a diverging successor.

        The successor is taken on ``gamma_prime`` unless it repeats the
        shared edge, in which case it is taken on ``gamma``: a fin spanning
        ``e, e`` on a loop edge puts its base corners in the apex link and
        no apex angle keeps the rewritten loop geodesic.
        """
        s, r = len(self.gamma_prime), len(self.gamma)
        e = self.gamma_prime[(self.j - 1) % s]
        f = self.gamma_prime[self.j % s]
        if f == e:
            f = self.gamma[self.j % r]
        return e, f


@dataclass(frozen=True)
class FinGlueRecord:
    iteration: int
    host_edges: tuple[str, str]
    apex: str
    apex_angle: float
    delta: float
    new_edge: str
    new_length: float
    k: float
    triangle: str

    def to_json(self) -> dict:
        return {
            "iteration": self.iteration,
            "host_edges": list(self.host_edges),
            "apex": self.apex,
            "apex_angle": self.apex_angle,
            "delta": self.delta,
            "new_edge": self.new_edge,
            "new_length": self.new_length,
            "k": self.k,
            "triangle": self.triangle,
        }


@dataclass
class TransversalizeResult:
    complex: Complex
    loops: list[ClosedLoop]
    fins: list[FinGlueRecord] = field(default_factory=list)
    retraction: dict[str, tuple[str, str]] = field(default_factory=dict)
    initial_count: int = 0
    final_count: int = 0

    @property
    def iterations(self) -> int:
        return len(self.fins)


def intersection_count(loops: Sequence[ClosedLoop], K: Complex) -> int:
    """Sum over undirected edges of (number of traversals - 1)."""
    c = Counter(min(e, K.rev(e)) for loop in loops for e in loop.edges)
    return sum(n - 1 for n in c.values())


def _first_divergence(g: tuple, h: tuple) -> int | None:
    r, s = len(g), len(h)
    period = r * s // math.gcd(r, s)
    for z in range(1, period):
        if g[z % r] != h[z % s]:
            return z
    return None


def find_branch(K: Complex, loops: Sequence[ClosedLoop]) -> Branch | None:
    """Deterministically pick two relabellings sharing a first edge and their split index.

    Returns ``None`` when the loops are already transverse. Raises
    :class:`FullOverlap` if some pair of relabellings never splits.
    """
    seqs = [loop.edges for loop in loops]
    revs = [tuple(K.rev(e) for e in reversed(s)) for s in seqs]
    best = None
    for i, g0 in enumerate(seqs):
        for r in range(len(g0)):
            g = g0[r:] + g0[:r]
            for i2 in range(i, len(seqs)):
                for orient, h0 in ((0, seqs[i2]), (1, revs[i2])):
                    for r2 in range(len(h0)):
                        if (i2, orient, r2) <= (i, 0, r):
                            continue
                        h = h0[r2:] + h0[:r2]
                        if h[0] != g[0]:
                            continue
                        z = _first_divergence(g, h)
                        if z is None:
                            _raise_overlap(i, i2, orient, g, h)
                        short, long_ = (g, h) if len(g) <= len(h) else (h, g)
                        idx = (i, i2) if len(g) <= len(h) else (i2, i)
                        cand = ((i, r, z), Branch(short, long_, z, idx))
                        if best is None or cand[0] < best[0]:
                            best = cand
    return None if best is None else best[1]


def _raise_overlap(i: int, i2: int, orient: int, g: tuple, h: tuple):
    if i != i2:
        kind = "common power"
        msg = f"loops {i} and {i2} are powers of a common loop"
    elif orient == 0:
        kind = "proper power"
        msg = f"loop {i} is a proper power"
    else:
        kind = "reversal"
        msg = f"loop {i} overlaps its own reverse, so it backtracks and is not geodesic"
    raise FullOverlap(msg, {"kind": kind, "loops": [i, i2], "gamma": list(g), "gamma_prime": list(h)})


def glue_fin(K: Complex, e: str, f: str, delta: float, k: float, iteration: int = 0) -> tuple[Complex, FinGlueRecord]:
    """Glue a ``(|e|, pi - delta, |f|)`` fin along the consecutive edges ``e``, ``f``."""
    if not (0 < delta < math.pi):
        raise ValueError(f"delta must lie in (0, pi), got {delta}")
    ee, ff = K.edge(e), K.edge(f)
    if ee.dst != ff.src:
        raise LoopError(f"edges {e} and {f} are not consecutive")
    b = ComplexBuilder(K)
    new = b.fresh("fin", K.edges)
    spec = FinSpec(ee.length, math.pi - delta, ff.length, k)
    length = fin_third_side(spec)
    new, new_rev = b.add_edge(ee.src, ff.dst, length, eid=new)
    tid = b.add_triangle((e, f, new_rev), k, tid=b.fresh("fin_t", K.triangles))
    rec = FinGlueRecord(iteration, (e, f), ee.dst, math.pi - delta, delta, new, length, k, tid)
    return b.build(), rec


def rewrite_pair(loop: ClosedLoop, e: str, f: str, new: str, rev: dict[str, str] | None = None) -> ClosedLoop:
    """Replace cyclic occurrences of the consecutive pair ``(e, f)`` by ``new``.

    With ``rev`` (edge -> reverse edge) the backwards path ``(rev f, rev e)``
    is replaced by ``rev new`` as well.
    """
    patterns = {(e, f): new}
    if rev is not None:
        patterns[(rev[f], rev[e])] = rev[new]
    s = loop.edges
    n = len(s)
    if n < 2:
        return loop
    chosen: dict[int, str] = {}
    used: set[int] = set()
    for i in range(n):
        j = (i + 1) % n
        rep = patterns.get((s[i], s[j]))
        if rep is not None and i not in used and j not in used:
            chosen[i] = rep
            used.update((i, j))
    if not chosen:
        return loop
    p = 1 if (n - 1) in chosen else 0
    out = []
    q = 0
    while q < n:
        pos = (p + q) % n
        if pos in chosen:
            out.append(chosen[pos])
            q += 2
        else:
            out.append(s[pos])
            q += 1
    return ClosedLoop(tuple(out))


def retract(loop: ClosedLoop, retraction: dict[str, tuple[str, str]]) -> ClosedLoop:
    """Expand fin edges back into the two-edge paths they replaced."""
    out: list[str] = []
    stack = list(reversed(loop.edges))
    while stack:
        e = stack.pop()
        if e in retraction:
            stack.extend(reversed(retraction[e]))
        else:
            out.append(e)
    return ClosedLoop(tuple(out))


def same_cyclic(a: ClosedLoop, b: ClosedLoop) -> bool:
    return len(a) == len(b) and any(a.rotate(r).edges == b.edges for r in range(len(a)))


def apex_bound(K: Complex, loops: Sequence[ClosedLoop], e: str, f: str) -> float:
    """Largest fin deficit the link argument certifies at the apex of ``e, f``.

    The new arc of length ``pi - delta`` joins ``rev e`` and ``f`` in the apex
    link. It closes no cycle shorter than ``2 pi`` while
    ``delta <= d(rev e, f) - pi``. A turn ``p -> q`` of a rewritten loop at
    the apex keeps angle ``>= pi`` while ``delta`` is at most
    ``d(p, rev e) + d(f, q)`` and ``d(p, f) + d(rev e, q)``. The fin's own
    edge enters the link as a leaf hanging off ``rev f`` or ``e``, so turns
    through it are measured from there.
    """
    new, wen = "\0new", "\0wen"
    re, rf = K.rev(e), K.rev(f)
    v = K.edge(e).dst
    L = build_link(K, v)
    adj = L.adjacency()
    d_re, d_f = _dijkstra(adj, re), _dijkstra(adj, f)
    head = {new: K.edge(f).dst, wen: K.edge(e).src}
    in_node = {new: rf, wen: e}
    out_node = {new: e, wen: rf}
    bound = d_re.get(f, math.inf) - math.pi
    for loop in loops:
        s = rewrite_pair(loop, e, f, new, {e: re, f: rf, new: wen}).edges
        for i, x in enumerate(s):
            if (head[x] if x in head else K.edge(x).dst) != v:
                continue
            y = s[(i + 1) % len(s)]
            p = in_node[x] if x in in_node else K.rev(x)
            q = out_node.get(y, y)
            bound = min(
                bound,
                d_re.get(p, math.inf) + d_f.get(q, math.inf),
                d_f.get(p, math.inf) + d_re.get(q, math.inf),
            )
    return bound


def transversalize(
    problem: TransversalityProblem,
    factor: float = DEFAULT_FACTOR,
    base_k: float = -1.0,
    tol: float = TOL,
) -> TransversalizeResult:
    K = problem.complex
    loops = [ClosedLoop(l.edges) for l in problem.loops]
    for idx, loop in enumerate(loops):
        check_loop(K, loop)
        chk = is_closed_geodesic(K, loop, tol)
        if not chk.ok:
            raise LoopError(f"loop {idx} is not a closed geodesic (min subtended angle {chk.min_angle})")
    chi = euler_characteristic(K)
    I0 = intersection_count(loops, K)
    res = TransversalizeResult(K, loops, initial_count=I0, final_count=I0)
    k_cur = K.kbar if K.kbar is not None else base_k
    I = I0
    while I > 0:
        pair = comparison_complex(K, factor)
        K = pair.compared
        k_cur *= factor
        branch = find_branch(K, loops)
        if branch is None:  # pragma: no cover - I > 0 guarantees a shared edge
            raise RuntimeError("positive overlap count without a shared edge")
        e, f = branch.host_edges
        # half the certified bound keeps strict margins; the bound is never
        # below the loop-restricted excess angle of the comparison step
        bound = apex_bound(K, loops, e, f)
        if not bound > 0:  # pragma: no cover
            raise RuntimeError(f"no admissible fin along {e}, {f}")
        delta = min(bound / 2, DELTA_CAP)
        K, rec = glue_fin(K, e, f, delta, k_cur, iteration=len(res.fins) + 1)
        res.fins.append(rec)
        res.retraction[rec.new_edge] = (e, f)
        res.retraction[K.rev(rec.new_edge)] = (K.rev(f), K.rev(e))
        revmap = {x: K.rev(x) for x in (e, f, rec.new_edge)}
        loops = [rewrite_pair(l, e, f, rec.new_edge, revmap) for l in loops]
        for idx, loop in enumerate(loops):
            chk = is_closed_geodesic(K, loop, tol)
            if not chk.ok:
                raise RuntimeError(f"loop {idx} lost geodesy after fin {rec.new_edge} (min angle {chk.min_angle})")
        nI = intersection_count(loops, K)
        if nI >= I:
            raise RuntimeError(f"overlap count did not drop ({I} -> {nI})")
        I = nI
        if len(res.fins) > I0:  # pragma: no cover
            raise RuntimeError("iteration bound exceeded")
    if euler_characteristic(K) != chi:  # pragma: no cover
        raise RuntimeError("euler characteristic changed")
    res.complex, res.loops, res.final_count = K, loops, I
    return res
