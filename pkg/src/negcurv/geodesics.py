"""Closed edge loops, local geodesy via link distances, and cyclic words."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from negcurv.complex import Complex, LinkGraph, build_link, link_distance
from negcurv.hypgeom import TOL


class LoopError(ValueError):
    pass


@dataclass(frozen=True)
class ClosedLoop:
    edges: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.edges:
            raise LoopError("a closed loop needs at least one edge")

    def __len__(self) -> int:
        return len(self.edges)

    def rotate(self, r: int) -> "ClosedLoop":
        r %= len(self.edges)
        return ClosedLoop(self.edges[r:] + self.edges[:r])

    def reversed(self, K: Complex) -> "ClosedLoop":
        return ClosedLoop(tuple(K.rev(e) for e in reversed(self.edges)))


def check_loop(K: Complex, loop: ClosedLoop) -> None:
    for e in loop.edges:
        if e not in K.edges:
            raise LoopError(f"loop edge {e!r} is not an edge of the complex")
    n = len(loop)
    for i in range(n):
        a, b = loop.edges[i], loop.edges[(i + 1) % n]
        if K.edge(a).dst != K.edge(b).src:
            raise LoopError(f"loop is not closed: {a} ends at {K.edge(a).dst}, {b} starts at {K.edge(b).src}")


def subtended_angle(K: Complex, loop: ClosedLoop, i: int, _links: dict | None = None) -> float:
    """Link distance at the head of edge ``i`` between the incoming and outgoing directions."""
    check_loop(K, loop)
    n = len(loop)
    e_in, e_out = loop.edges[i % n], loop.edges[(i + 1) % n]
    v = K.edge(e_in).dst
    if _links is not None:
        if v not in _links:
            _links[v] = build_link(K, v)
        L = _links[v]
    else:
        L = build_link(K, v)
    return link_distance(L, K.rev(e_in), e_out)


@dataclass
class GeodesicCheck:
    ok: bool
    angles: list[float]

    @property
    def margins(self) -> list[float]:
        return [a - math.pi for a in self.angles]

    @property
    def min_angle(self) -> float:
        return min(self.angles)


def is_closed_geodesic(K: Complex, loop: ClosedLoop, tol: float = TOL, links: dict[str, LinkGraph] | None = None) -> GeodesicCheck:
    links = {} if links is None else links
    angles = [subtended_angle(K, loop, i, links) for i in range(len(loop))]
    return GeodesicCheck(all(a >= math.pi - tol for a in angles), angles)


def loop_length(K: Complex, loop: ClosedLoop) -> float:
    return math.fsum(K.length(e) for e in loop.edges)


# --------------------------------------------------------------------------
# cyclic words


def swapcase_inverse(x: str) -> str:
    return x.swapcase()


@dataclass(frozen=True)
class CyclicWord:
    """Cyclically reduced word; lower case letters are generators, upper case their inverses."""

    letters: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if not self.letters:
            raise LoopError("empty word")
        if not is_cyclically_reduced(self.letters, swapcase_inverse):
            raise LoopError(f"{self} is not cyclically reduced")

    @classmethod
    def parse(cls, s: str) -> "CyclicWord":
        if not s or not s.isalpha():
            raise LoopError(f"word {s!r} must be a non-empty string of letters")
        return cls(tuple(s))

    def __str__(self) -> str:
        return "".join(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(tuple(x.swapcase() for x in reversed(self.letters)))


def is_cyclically_reduced(seq: Sequence[Hashable], inv: Callable = swapcase_inverse) -> bool:
    n = len(seq)
    if n <= 1:
        return n == 1
    return all(seq[(i + 1) % n] != inv(seq[i]) for i in range(n))


def minimal_period(seq: Sequence[Hashable]) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and all(seq[i] == seq[i % p] for i in range(n)):
            return p
    return n


def is_proper_power(w: CyclicWord | Sequence[Hashable]) -> bool:
    """True iff the cyclic word is ``u**m`` for some ``m >= 2``."""
    seq = w.letters if isinstance(w, CyclicWord) else tuple(w)
    if not seq:
        raise LoopError("empty word")
    return minimal_period(seq) < len(seq)


def rotations(seq: Sequence[Hashable]) -> list[tuple]:
    t = tuple(seq)
    return [t[i:] + t[:i] for i in range(len(t))]


def conjugate_or_inverse_conjugate(w1, w2, inv: Callable = swapcase_inverse) -> bool:
    """Whether ``w2`` is a cyclic rotation of ``w1`` or of its inverse."""
    s1 = w1.letters if isinstance(w1, CyclicWord) else tuple(w1)
    s2 = w2.letters if isinstance(w2, CyclicWord) else tuple(w2)
    if len(s1) != len(s2):
        return False
    inv1 = tuple(inv(x) for x in reversed(s1))
    r = set(rotations(s1)) | set(rotations(inv1))
    return s2 in r
