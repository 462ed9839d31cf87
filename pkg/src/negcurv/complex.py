"""Delta-style triangle complexes with per-triangle negative curvature.

Edges are directed and come in pairs ``e`` / ``rev(e)``; a triangle is a
closed walk of three directed edges. Loop edges, repeated vertices and
triangles sharing several edges are all allowed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import count

from negcurv.hypgeom import TOL, GeometryError, triangle_angles

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Edge:
    id: str
    rev: str
    src: str
    dst: str
    length: float


@dataclass(frozen=True)
class Triangle:
    id: str
    sides: tuple[str, str, str]
    k: float


@dataclass(frozen=True)
class Corner:
    """Corner of ``triangle`` at the head of its ``position``-th side."""

    triangle: str
    position: int
    vertex: str
    angle: float


@dataclass(frozen=True)
class Complex:
    vertices: tuple[str, ...]
    edges: dict[str, Edge]
    triangles: dict[str, Triangle] = field(default_factory=dict)

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def rev(self, eid: str) -> str:
        return self.edge(eid).rev

    def length(self, eid: str) -> float:
        return self.edge(eid).length

    def edge_pairs(self) -> list[tuple[str, str]]:
        """One representative per undirected edge, lexicographically first id."""
        return sorted({tuple(sorted((e.id, e.rev))) for e in self.edges.values()})

    def outgoing(self, v: str) -> list[str]:
        return sorted(e.id for e in self.edges.values() if e.src == v)

    @property
    def kbar(self) -> float | None:
        """Largest (closest to zero) triangle curvature, ``None`` without triangles."""
        if not self.triangles:
            return None
        return max(t.k for t in self.triangles.values())


class ComplexBuilder:
    """Mutable accumulator that produces an immutable :class:`Complex`."""

    def __init__(self, base: Complex | None = None):
        self.vertices: list[str] = list(base.vertices) if base else []
        self.edges: dict[str, Edge] = dict(base.edges) if base else {}
        self.triangles: dict[str, Triangle] = dict(base.triangles) if base else {}
        self._fresh = count()

    def fresh(self, prefix: str, pool: dict | list) -> str:
        while True:
            name = f"{prefix}{next(self._fresh)}"
            if name not in pool:
                return name

    def add_vertex(self, v: str) -> str:
        if v in self.vertices:
            raise ValueError(f"duplicate vertex {v!r}")
        self.vertices.append(v)
        return v

    def add_edge(self, src: str, dst: str, length: float, eid: str | None = None, rev: str | None = None) -> tuple[str, str]:
        eid = eid if eid is not None else self.fresh("e", self.edges)
        rev = rev if rev is not None else f"{eid}~"
        for x in (eid, rev):
            if x in self.edges:
                raise ValueError(f"duplicate edge {x!r}")
        if eid == rev:
            raise ValueError("an edge cannot be its own reverse")
        self.edges[eid] = Edge(eid, rev, src, dst, float(length))
        self.edges[rev] = Edge(rev, eid, dst, src, float(length))
        return eid, rev

    def add_triangle(self, sides, k: float, tid: str | None = None) -> str:
        tid = tid if tid is not None else self.fresh("t", self.triangles)
        if tid in self.triangles:
            raise ValueError(f"duplicate triangle {tid!r}")
        self.triangles[tid] = Triangle(tid, tuple(sides), float(k))
        return tid

    def build(self) -> Complex:
        return Complex(tuple(self.vertices), dict(self.edges), dict(self.triangles))


# --------------------------------------------------------------------------
# validation


@dataclass
class Diagnostics:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate(K: Complex) -> Diagnostics:
    diag = Diagnostics()
    out = diag.problems
    vset = set(K.vertices)
    if len(vset) != len(K.vertices):
        out.append("vertices: duplicate vertex ids")
    for e in sorted(K.edges.values(), key=lambda e: e.id):
        where = f"edge {e.id}"
        missing = sorted({e.src, e.dst} - vset)
        if missing:
            out.append(f"{where}: endpoint {', '.join(missing)} is not a vertex")
        if not (e.length > 0 and math.isfinite(e.length)):
            out.append(f"{where}: length must be positive and finite")
        if e.rev == e.id:
            out.append(f"{where}: edge equals its own reverse")
            continue
        r = K.edges.get(e.rev)
        if r is None:
            out.append(f"{where}: reverse {e.rev} missing")
            continue
        if r.rev != e.id:
            out.append(f"{where}: reverse of reverse is {r.rev}, not {e.id}")
        if r.src != e.dst or r.dst != e.src:
            out.append(f"{where}: reverse {r.id} has mismatched endpoints")
        if r.length != e.length:
            out.append(f"{where}: length {e.length} differs from reverse length {r.length}")
    for t in sorted(K.triangles.values(), key=lambda t: t.id):
        where = f"triangle {t.id}"
        if len(t.sides) != 3:
            out.append(f"{where}: needs exactly three sides")
            continue
        if not (t.k < 0 and math.isfinite(t.k)):
            out.append(f"{where}: curvature {t.k} must be finite and negative")
        missing = [s for s in t.sides if s not in K.edges]
        if missing:
            out.append(f"{where}: unknown sides {missing}")
            continue
        es = [K.edges[s] for s in t.sides]
        for i in range(3):
            if es[i].dst != es[(i + 1) % 3].src:
                out.append(f"{where}: sides do not form a closed walk at position {i}")
        if t.k < 0:
            try:
                triangle_angles(*(e.length for e in es), t.k)
            except GeometryError as exc:
                out.append(f"{where}: {exc}")
    return diag


def require_valid(K: Complex) -> None:
    diag = validate(K)
    if not diag.ok:
        raise ValueError("invalid complex: " + "; ".join(diag.problems))


# --------------------------------------------------------------------------
# angles and links


def triangle_corner_angles(K: Complex, tid: str) -> tuple[float, float, float]:
    """Corner angles of triangle ``tid`` indexed by corner position.

    Position ``p`` is the corner at the head of side ``p``, between
    ``rev(sides[p])`` and ``sides[p+1]``; it faces side ``p+2``.
    """
    t = K.triangles[tid]
    lens = [K.length(s) for s in t.sides]
    opp = triangle_angles(*lens, t.k)  # opp[i] faces side i
    return opp[2], opp[0], opp[1]


def corners(K: Complex) -> list[Corner]:
    out = []
    for tid in sorted(K.triangles):
        t = K.triangles[tid]
        angs = triangle_corner_angles(K, tid)
        for p in range(3):
            out.append(Corner(tid, p, K.edge(t.sides[p]).dst, angs[p]))
    return out


def corner_angle(K: Complex, c: Corner) -> float:
    return triangle_corner_angles(K, c.triangle)[c.position]


def corner_nodes(K: Complex, tid: str, position: int) -> tuple[str, str]:
    """The two link nodes joined by the arc of the given corner."""
    s = K.triangles[tid].sides
    return K.rev(s[position]), s[(position + 1) % 3]


@dataclass(frozen=True)
class Arc:
    u: str
    w: str
    length: float
    source: tuple[str, int] | None = None


@dataclass(frozen=True)
class LinkGraph:
    """Metric graph; arcs may be loops or parallel."""

    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    vertex: str | None = None

    def adjacency(self, skip: int | None = None) -> dict[str, list[tuple[str, float]]]:
        adj: dict[str, list[tuple[str, float]]] = {n: [] for n in self.nodes}
        for i, a in enumerate(self.arcs):
            if i == skip:
                continue
            adj[a.u].append((a.w, a.length))
            if a.u != a.w:
                adj[a.w].append((a.u, a.length))
        return adj


def build_link(K: Complex, v: str) -> LinkGraph:
    if v not in K.vertices:
        raise KeyError(f"unknown vertex {v!r}")
    nodes = tuple(K.outgoing(v))
    arcs = []
    for tid in sorted(K.triangles):
        t = K.triangles[tid]
        angs = None
        for p in range(3):
            if K.edge(t.sides[p]).dst != v:
                continue
            angs = angs or triangle_corner_angles(K, tid)
            u, w = corner_nodes(K, tid, p)
            if w < u:
                u, w = w, u
            arcs.append(Arc(u, w, angs[p], (tid, p)))
    arcs.sort(key=lambda a: (a.u, a.w, a.length, a.source))
    return LinkGraph(nodes, tuple(arcs), v)


def _dijkstra(adj: dict[str, list[tuple[str, float]]], src: str, dst: str | None = None) -> dict[str, float]:
    dist = {src: 0.0}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, n = heapq.heappop(heap)
        if n in done:
            continue
        done.add(n)
        if n == dst:
            break
        for m, l in adj[n]:
            nd = d + l
            if nd < dist.get(m, math.inf):
                dist[m] = nd
                heapq.heappush(heap, (nd, m))
    return dist


def link_distance(L: LinkGraph, n1: str, n2: str) -> float:
    for n in (n1, n2):
        if n not in L.nodes:
            raise KeyError(f"{n!r} is not a node of the link")
    if n1 == n2:
        return 0.0
    return _dijkstra(L.adjacency(), n1, n2).get(n2, math.inf)


def systole(L: LinkGraph) -> float:
    """Length of the shortest embedded cycle, ``inf`` for a forest.

    Every shortest cycle contains some arc ``(u, w)``; it is that arc plus a
    shortest ``u``-``w`` path avoiding it.
    """
    best = math.inf
    for i, a in enumerate(L.arcs):
        if a.length >= best:
            continue
        if a.u == a.w:
            best = a.length
            continue
        d = _dijkstra(L.adjacency(skip=i), a.u, a.w).get(a.w, math.inf)
        best = min(best, a.length + d)
    return best


@dataclass
class LinkReport:
    passed: bool
    systoles: dict[str, float]
    kbar: float | None
    tol: float

    @property
    def margins(self) -> dict[str, float]:
        return {v: s - TWO_PI for v, s in self.systoles.items()}

    @property
    def failing(self) -> list[str]:
        return [v for v, s in self.systoles.items() if s < TWO_PI - self.tol]

    @property
    def min_systole(self) -> float:
        return min(self.systoles.values(), default=math.inf)


def check_link_condition(K: Complex, tol: float = TOL) -> LinkReport:
    """Gromov's link condition in dimension two: every link has systole >= 2 pi."""
    sys_ = {v: systole(build_link(K, v)) for v in sorted(K.vertices)}
    passed = all(s >= TWO_PI - tol for s in sys_.values())
    return LinkReport(passed, sys_, K.kbar, tol)


def euler_characteristic(K: Complex) -> int:
    return len(K.vertices) - len(K.edges) // 2 + len(K.triangles)


def scale_metric(K: Complex, s: float) -> Complex:
    """Multiply all lengths by ``s``; curvatures are divided by ``s**2`` so angles stay put."""
    if not s > 0:
        raise ValueError("scale factor must be positive")
    edges = {i: Edge(e.id, e.rev, e.src, e.dst, e.length * s) for i, e in K.edges.items()}
    tris = {i: Triangle(t.id, t.sides, t.k / (s * s)) for i, t in K.triangles.items()}
    return Complex(K.vertices, edges, tris)


def with_curvatures(K: Complex, factor: float) -> Complex:
    """Same combinatorics and lengths, every curvature multiplied by ``factor``."""
    tris = {i: Triangle(t.id, t.sides, t.k * factor) for i, t in K.triangles.items()}
    return Complex(K.vertices, dict(K.edges), tris)
