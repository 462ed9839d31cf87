"""Triangulated hyperbolic annuli with one geodesic and one cornered boundary.

The two Lambert quadrilaterals of an :class:`~negcurv.hypgeom.AnnulusSpec`
are glued along their shared right-angled leg into a Saccheri
quadrilateral; identifying its two remaining legs closes it into the
annulus. The quadrilateral is triangulated as a strip between the
subdivided base (the geodesic boundary) and the subdivided summit (the
cornered boundary), so every triangle is a genuine geodesic triangle with
sides read off plane coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from negcurv.complex import ComplexBuilder, Complex
from negcurv.hypgeom import AnnulusSpec, PlanePoint, annulus_params, distance, geodesic_point, saccheri_vertices

LEG = ("leg",)


def rung(i: int, j: int, d: int, n: int) -> tuple:
    if (i, j) in ((0, 0), (d, n)):
        return LEG
    return ("rung", i, j)


@dataclass
class AnnulusMesh:
    """Strip triangulation of an annulus.

    Base points ``b_0..b_d`` and summit points ``t_0..t_n`` are listed left to
    right; ``b_d`` is identified with ``b_0``, ``t_n`` with ``t_0`` (the
    corner), and the left leg ``b_0 t_0`` with the right leg ``b_d t_n``.
    Triangle sides are ``(key, forward)`` pairs where ``key`` is ``("bot", i)``,
    ``("top", j)``, ``("rung", i, j)`` or :data:`LEG`; forward means the
    direction base to summit for rungs, left to right otherwise.
    """

    spec: AnnulusSpec
    base: list[PlanePoint]
    summit: list[PlanePoint]
    outer_lengths: list[float]
    degree: int
    triangles: list[tuple[tuple[tuple, bool], ...]] = field(default_factory=list)
    rung_lengths: dict[tuple, float] = field(default_factory=dict)

    @property
    def inner_length(self) -> float:
        return self.spec.A / self.degree

    def side_length(self, key: tuple) -> float:
        if key[0] == "bot":
            return self.inner_length
        if key[0] == "top":
            return self.outer_lengths[key[1]]
        return self.rung_lengths[key]


def _points_along(p: PlanePoint, q: PlanePoint, cumulative: list[float]) -> list[PlanePoint]:
    return [p] + [geodesic_point(p, q, t) for t in cumulative[1:-1]] + [q]


def triangulate_annulus(spec: AnnulusSpec, outer_lengths: list[float], degree: int = 1) -> AnnulusMesh:
    """Subdivide the summit into ``outer_lengths`` and the base into ``degree`` equal arcs.

    The first summit point carries the corner. ``sum(outer_lengths)`` must
    equal ``spec.C``.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if not outer_lengths or min(outer_lengths) <= 0:
        raise ValueError("outer boundary needs positive edge lengths")
    total = math.fsum(outer_lengths)
    if abs(total - spec.C) > 1e-9 * max(1.0, spec.C):
        raise ValueError(f"outer lengths sum to {total}, expected {spec.C}")
    bl, br, tl, tr = saccheri_vertices(spec)
    d, n = degree, len(outer_lengths)
    step = spec.A / d
    base = _points_along(bl, br, [i * step for i in range(d + 1)])
    cum = [0.0]
    for l in outer_lengths:
        cum.append(cum[-1] + l)
    summit = _points_along(tl, tr, cum)
    mesh = AnnulusMesh(spec, base, summit, list(outer_lengths), d)

    def add_rung(i: int, j: int) -> tuple:
        key = rung(i, j, d, n)
        if key not in mesh.rung_lengths:
            mesh.rung_lengths[key] = distance(base[i], summit[j])
        return key

    i = j = 0
    add_rung(0, 0)
    while i < d or j < n:
        if j == n:
            up = False
        elif i == d:
            up = True
        else:
            up = distance(base[i], summit[j + 1]) < distance(base[i + 1], summit[j])
        if up:
            r0, r1 = add_rung(i, j), add_rung(i, j + 1)
            mesh.triangles.append(((r0, True), (("top", j), True), (r1, False)))
            j += 1
        else:
            r0, r1 = add_rung(i, j), add_rung(i + 1, j)
            mesh.triangles.append(((("bot", i), True), (r1, True), (r0, False)))
            i += 1
    return mesh


@dataclass
class AnnulusEmbedding:
    edges: dict[tuple, str]
    triangles: list[str]


def embed_annulus(
    b: ComplexBuilder,
    mesh: AnnulusMesh,
    inner_vertex: str,
    inner_edge: str,
    outer_edges: list[str],
    prefix: str,
) -> AnnulusEmbedding:
    """Add the annulus to ``b``.

    Every base point goes to ``inner_vertex`` and every base arc to the loop
    ``inner_edge``; summit arc ``j`` goes to ``outer_edges[j]``. Only rungs
    and triangles are new.
    """
    E = b.edges
    if len(outer_edges) != len(mesh.outer_lengths):
        raise ValueError("outer edge count does not match the subdivision")
    ie = E[inner_edge]
    if ie.src != inner_vertex or ie.dst != inner_vertex:
        raise ValueError(f"{inner_edge} is not a loop at {inner_vertex}")
    summit_v = [E[outer_edges[0]].src] + [E[e].dst for e in outer_edges]
    keymap: dict[tuple, str] = {("bot", i): inner_edge for i in range(mesh.degree)}
    keymap.update({("top", j): e for j, e in enumerate(outer_edges)})
    d, n = mesh.degree, len(outer_edges)
    for key in sorted(mesh.rung_lengths, key=lambda k: (k[0], k[1:])):
        if key == LEG:
            dst, name = summit_v[0], f"{prefix}leg"
        else:
            dst, name = summit_v[key[2]], f"{prefix}r{key[1]}_{key[2]}"
        eid, _ = b.add_edge(inner_vertex, dst, mesh.rung_lengths[key], eid=name)
        keymap[key] = eid
    tids = []
    for t, tri in enumerate(mesh.triangles):
        sides = [keymap[key] if fwd else E[keymap[key]].rev for key, fwd in tri]
        tids.append(b.add_triangle(sides, mesh.spec.k, tid=f"{prefix}t{t}"))
    return AnnulusEmbedding(keymap, tids)


def annulus_complex(mesh: AnnulusMesh) -> tuple[Complex, AnnulusEmbedding]:
    """The annulus alone, its geodesic boundary wrapped ``degree`` times onto a circle.

    Vertices are ``"w"`` (the circle) and ``"t0".."t{n-1}"`` (the outer boundary).
    """
    b = ComplexBuilder()
    n = len(mesh.outer_lengths)
    b.add_vertex("w")
    b.add_edge("w", "w", mesh.inner_length, eid="w_loop")
    for j in range(n):
        b.add_vertex(f"t{j}")
    outer = [b.add_edge(f"t{j}", f"t{(j + 1) % n}", mesh.outer_lengths[j], eid=f"s{j}")[0] for j in range(n)]
    emb = embed_annulus(b, mesh, "w", "w_loop", outer, "")
    return b.build(), emb


def standard_annulus(theta: float, A: float, C: float, outer_parts: int = 3, degree: int = 2) -> tuple[Complex, AnnulusMesh]:
    """Convenience: equal subdivisions of both boundaries."""
    spec = annulus_params(theta, A, C)
    mesh = triangulate_annulus(spec, [C / outer_parts] * outer_parts, degree)
    K, _ = annulus_complex(mesh)
    return K, mesh
