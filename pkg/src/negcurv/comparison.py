"""Comparison complexes and excess angles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from negcurv.complex import Complex, corners, with_curvatures
from negcurv.geodesics import ClosedLoop, LoopError, is_closed_geodesic
from negcurv.hypgeom import TOL

DEFAULT_FACTOR = 0.5


@dataclass(frozen=True)
class ComparisonPair:
    """``compared`` has the combinatorics and edge lengths of ``original``,
    with every curvature multiplied by ``factor``."""

    original: Complex
    compared: Complex
    factor: float

    @property
    def corner_map(self) -> dict[tuple[str, int], tuple[str, int]]:
        # triangle ids and corner positions are shared
        return {(t, p): (t, p) for t in self.original.triangles for p in range(3)}


@dataclass(frozen=True)
class ExcessAngle:
    delta: float
    scope: str
    n_corners: int


def comparison_complex(K: Complex, factor: float = DEFAULT_FACTOR) -> ComparisonPair:
    if not (0 < factor < 1):
        raise ValueError(f"comparison factor must lie in (0, 1), got {factor}")
    return ComparisonPair(K, with_curvatures(K, factor), factor)


def loop_vertices(K: Complex, loops: Iterable[ClosedLoop]) -> set[str]:
    return {K.edge(e).dst for loop in loops for e in loop.edges}


def excess_angle(pair: ComparisonPair, loops: Iterable[ClosedLoop] | None = None) -> ExcessAngle:
    """Smallest corner-angle gain from ``original`` to ``compared``.

    With ``loops`` the scope is restricted to corners at vertices the loops
    visit. An empty scope gives ``inf``.
    """
    before = corners(pair.original)
    after = {(c.triangle, c.position): c.angle for c in corners(pair.compared)}
    scope = "all"
    if loops is not None:
        vs = loop_vertices(pair.original, loops)
        before = [c for c in before if c.vertex in vs]
        scope = "loops"
    gains = [after[(c.triangle, c.position)] - c.angle for c in before]
    return ExcessAngle(min(gains, default=math.inf), scope, len(gains))


def geodesic_excess(K: Complex, loop: ClosedLoop, cap: float = math.pi, tol: float = TOL) -> float:
    """Half the amount by which the loop's smallest subtended angle exceeds pi."""
    chk = is_closed_geodesic(K, loop, tol)
    if not chk.ok:
        raise LoopError(f"loop {loop.edges} is not a closed geodesic (min angle {chk.min_angle})")
    return min(max((chk.min_angle - math.pi) / 2, 0.0), cap)
