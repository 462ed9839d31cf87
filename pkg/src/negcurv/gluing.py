"""Assemble a negatively curved 2-complex from a graph of spaces.

Vertex spaces are points (type P), circles (type N) or negatively curved
2-complexes (type M); edge spaces are points or circles. Circle edges run
from an N vertex to an M vertex after :func:`normalize`. The pipeline
transversalizes the attaching geodesics inside each M vertex space,
sizes the N circles, replaces each edge cylinder with a triangulated
hyperbolic annulus, and certifies the result with the link condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from negcurv.annulus import AnnulusMesh, embed_annulus, triangulate_annulus
from negcurv.comparison import DEFAULT_FACTOR, comparison_complex, geodesic_excess, loop_vertices
from negcurv.complex import (
    TWO_PI,
    Complex,
    ComplexBuilder,
    check_link_condition,
    corners,
    euler_characteristic,
    validate,
)
from negcurv.geodesics import (
    ClosedLoop,
    LoopError,
    check_loop,
    conjugate_or_inverse_conjugate,
    is_closed_geodesic,
    is_proper_power,
    loop_length,
)
from negcurv.hypgeom import TOL, annulus_params, triangle_angles
from negcurv.transverse import TransversalityProblem, TransversalizeResult, transversalize

SCHEMA_VERSION = 1
DELTA_CAP = math.pi / 2
POINT_EDGE_LENGTH = 1.0
CIRCLE_SHRINK = 0.5


class GluingError(ValueError):
    def __init__(self, message: str, stage: str = "", witness: dict | None = None):
        super().__init__(message)
        self.stage = stage
        self.witness = witness or {}


class MalnormalityError(GluingError):
    pass


@dataclass(frozen=True)
class GVertex:
    id: str
    type: str  # "P", "N" or "M"
    payload: Complex | None = None


@dataclass(frozen=True)
class GEdge:
    """Directed edge of the underlying graph.

    Attaching data describes the end at ``src``: a closed geodesic ``gamma``
    in the payload when ``src`` is an M vertex, a winding ``degree`` when it
    is an N vertex.
    """

    id: str
    rev: str
    src: str
    dst: str
    kind: str  # "circle" or "point"
    gamma: ClosedLoop | None = None
    degree: int | None = None


@dataclass
class GraphOfSpaces:
    vertices: dict[str, GVertex]
    edges: dict[str, GEdge]

    def edge_pairs(self) -> list[tuple[str, str]]:
        return sorted({tuple(sorted((e.id, e.rev))) for e in self.edges.values()})

    def incident_circles(self, v: str) -> list[GEdge]:
        return [self.edges[i] for i in sorted(self.edges) if self.edges[i].src == v and self.edges[i].kind == "circle"]


# --------------------------------------------------------------------------
# validation and normalization


def validate_graph(g: GraphOfSpaces, tol: float = TOL, require_normal: bool = True) -> None:
    for v in g.vertices.values():
        if v.type not in ("P", "N", "M"):
            raise GluingError(f"vertex {v.id}: unknown type {v.type!r}", "validate")
        if v.type == "M":
            if v.payload is None:
                raise GluingError(f"vertex {v.id}: type M needs a payload complex", "validate")
            diag = validate(v.payload)
            if not diag.ok:
                raise GluingError(f"vertex {v.id}: invalid payload: {'; '.join(diag.problems)}", "validate")
            rep = check_link_condition(v.payload, tol)
            if not rep.passed:
                raise GluingError(f"vertex {v.id}: payload fails the link condition at {rep.failing}", "validate")
    for e in g.edges.values():
        where = f"edge {e.id}"
        if e.src not in g.vertices or e.dst not in g.vertices:
            raise GluingError(f"{where}: unknown endpoint", "validate")
        r = g.edges.get(e.rev)
        if r is None or r.rev != e.id or r.src != e.dst or r.dst != e.src or e.rev == e.id:
            raise GluingError(f"{where}: reverse record {e.rev!r} is missing or inconsistent", "validate")
        if e.kind not in ("circle", "point"):
            raise GluingError(f"{where}: unknown kind {e.kind!r}", "validate")
        if r.kind != e.kind:
            raise GluingError(f"{where}: kind differs from its reverse", "validate")
        if e.kind == "point":
            continue
        types = (g.vertices[e.src].type, g.vertices[e.dst].type)
        if "P" in types:
            raise GluingError(f"{where}: circle edge cannot touch a point vertex space", "validate")
        if types == ("N", "N"):
            raise GluingError(f"{where}: circle edge joins two circle vertex spaces", "normalize")
        if require_normal and types == ("M", "M"):
            raise GluingError(f"{where}: circle edge joins two M vertex spaces; normalize first", "validate")
        st = types[0]
        if st == "N":
            if not isinstance(e.degree, int) or e.degree < 1:
                raise GluingError(f"{where}: N-side attachment needs a degree >= 1", "validate")
        else:
            if e.gamma is None:
                raise GluingError(f"{where}: M-side attachment needs a loop gamma", "validate")
            K = g.vertices[e.src].payload
            try:
                check_loop(K, e.gamma)
            except (LoopError, KeyError) as exc:
                raise GluingError(f"{where}: {exc}", "validate") from None
            chk = is_closed_geodesic(K, e.gamma, tol)
            if not chk.ok:
                raise GluingError(
                    f"{where}: attaching loop is not a closed geodesic (min angle {chk.min_angle})", "validate"
                )


@dataclass
class Normalization:
    graph: GraphOfSpaces
    inserted: list[dict] = field(default_factory=list)


def normalize_with_log(g: GraphOfSpaces) -> Normalization:
    verts = dict(g.vertices)
    edges: dict[str, GEdge] = {}
    log = []
    done = set()
    for eid in sorted(g.edges):
        e = g.edges[eid]
        if eid in done:
            continue
        done.update((e.id, e.rev))
        r = g.edges[e.rev]
        types = (g.vertices[e.src].type, g.vertices[e.dst].type)
        if e.kind == "circle" and types == ("N", "N"):
            raise GluingError(f"edge {e.id}: circle edge joins two circle vertex spaces", "normalize")
        if e.kind != "circle" or types != ("M", "M"):
            edges[e.id], edges[r.id] = e, r
            continue
        w = f"{e.id}#mid"
        while w in verts:
            w += "#"
        verts[w] = GVertex(w, "N")
        a, b = f"{e.id}#1", f"{e.id}#2"
        edges[a] = GEdge(a, f"{a}~", e.src, w, "circle", gamma=e.gamma)
        edges[f"{a}~"] = GEdge(f"{a}~", a, w, e.src, "circle", degree=1)
        edges[b] = GEdge(b, f"{b}~", w, e.dst, "circle", degree=1)
        edges[f"{b}~"] = GEdge(f"{b}~", b, e.dst, w, "circle", gamma=r.gamma)
        log.append({"split_edge": e.id, "inserted_vertex": w, "edges": [a, b]})
    return Normalization(GraphOfSpaces(verts, edges), log)


def normalize(g: GraphOfSpaces) -> GraphOfSpaces:
    return normalize_with_log(g).graph


# --------------------------------------------------------------------------
# malnormality


def check_malnormal_family(g: GraphOfSpaces) -> dict[str, str]:
    """``"verified"`` for triangle-free M payloads, ``"assumed"`` otherwise.

    In a graph, closed geodesics are cyclically reduced edge paths, so
    conjugacy up to inversion is rotation equality and individual
    malnormality is the absence of a proper period.
    """
    out = {}
    for vid in sorted(g.vertices):
        v = g.vertices[vid]
        if v.type != "M":
            continue
        K = v.payload
        inc = g.incident_circles(vid)
        if K.triangles:
            out[vid] = "assumed"
            continue
        for e in inc:
            if is_proper_power(e.gamma.edges):
                raise MalnormalityError(
                    f"vertex {vid}: loop of edge {e.id} is a proper power", "malnormal",
                    {"vertex": vid, "kind": "proper power", "edges": [e.id], "loop": list(e.gamma.edges)},
                )
        for x in range(len(inc)):
            for y in range(x + 1, len(inc)):
                e1, e2 = inc[x], inc[y]
                if conjugate_or_inverse_conjugate(e1.gamma.edges, e2.gamma.edges, K.rev):
                    raise MalnormalityError(
                        f"vertex {vid}: loops of edges {e1.id} and {e2.id} are conjugate up to inversion",
                        "malnormal",
                        {"vertex": vid, "kind": "conjugate", "edges": [e1.id, e2.id],
                         "loops": [list(e1.gamma.edges), list(e2.gamma.edges)]},
                    )
        out[vid] = "verified"
    return out


# --------------------------------------------------------------------------
# circle lengths and annuli


def choose_circle_lengths(g: GraphOfSpaces, loop_lengths: dict[str, float] | None = None) -> dict[str, float]:
    """Half of the largest admissible circle length at each N vertex.

    ``loop_lengths`` maps an M-side edge id to the length of its (possibly
    rewritten) attaching geodesic; by default the graph's own loops are used.
    """
    out = {}
    for wid in sorted(g.vertices):
        if g.vertices[wid].type != "N":
            continue
        ratios = []
        for e in g.incident_circles(wid):
            m = g.edges[e.rev]
            if loop_lengths is not None and m.id in loop_lengths:
                l = loop_lengths[m.id]
            else:
                l = loop_length(g.vertices[m.src].payload, m.gamma)
            ratios.append(l / e.degree)
        out[wid] = CIRCLE_SHRINK * min(ratios) if ratios else 1.0
    return out


def build_annulus(outer_lengths: list[float], degree: int, a_w: float, delta_v: float) -> AnnulusMesh:
    """Annulus whose cornered side follows ``outer_lengths`` and whose
    geodesic side wraps ``degree`` times around a circle of length ``a_w``."""
    C = math.fsum(outer_lengths)
    A = a_w * degree
    if not (0 < delta_v < math.pi):
        raise GluingError(f"excess angle {delta_v} must lie in (0, pi)", "annulus")
    if not A < C:
        raise GluingError(f"geodesic side {A} must be shorter than the attaching loop {C}", "annulus")
    spec = annulus_params(math.pi - delta_v, A, C)
    return triangulate_annulus(spec, outer_lengths, degree)


def annulus_angle_sums(mesh: AnnulusMesh) -> tuple[list[float], list[float]]:
    """Total angle of the annulus at each base point and each summit point."""
    d, n = mesh.degree, len(mesh.outer_lengths)
    base = [0.0] * d
    top = [0.0] * n

    def endpoints(key, fwd):
        if key[0] == "bot":
            a, b = ("b", key[1]), ("b", key[1] + 1)
        elif key[0] == "top":
            a, b = ("t", key[1]), ("t", key[1] + 1)
        elif key[0] == "leg":
            a, b = ("b", 0), ("t", 0)
        else:
            a, b = ("b", key[1]), ("t", key[2])
        return (a, b) if fwd else (b, a)

    for tri in mesh.triangles:
        lens = [mesh.side_length(k) for k, _ in tri]
        opp = triangle_angles(*lens, mesh.spec.k)
        for p in range(3):
            _, head = endpoints(*tri[p])
            ang = opp[(p + 2) % 3]
            kind, idx = head
            if kind == "b":
                base[idx % d] += ang
            else:
                top[idx % n] += ang
    return base, top


# --------------------------------------------------------------------------
# the pipeline


@dataclass
class VertexPrep:
    complex: Complex
    loops: dict[str, ClosedLoop]
    transversal: TransversalizeResult | None
    geodesic_excess: float
    corner_floor: float
    delta: float
    extra_comparison: bool


def _prepare_vertex(v: GVertex, inc: list[GEdge], factor: float, tol: float) -> VertexPrep:
    K = v.payload
    if not inc:
        return VertexPrep(K, {}, None, math.inf, math.inf, math.inf, False)
    res = transversalize(TransversalityProblem(K, [e.gamma for e in inc]), factor, tol=tol)
    K = res.complex
    loops = dict(zip((e.id for e in inc), res.loops))

    def excess(K):
        return min(geodesic_excess(K, l, cap=math.pi, tol=tol) for l in loops.values())

    ex = excess(K)
    extra = False
    if ex <= tol:
        K = comparison_complex(K, factor).compared
        ex = excess(K)
        extra = True
    vs = loop_vertices(K, loops.values())
    floor = min((c.angle for c in corners(K) if c.vertex in vs), default=math.inf)
    delta = min(ex, floor, DELTA_CAP)
    if not delta > 0:
        raise GluingError(f"vertex {v.id}: no positive excess angle available", "excess")
    return VertexPrep(K, loops, res, ex, floor, delta, extra)


def _num(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def basepoint(g: GraphOfSpaces, vid: str) -> str:
    v = g.vertices[vid]
    if v.type == "M":
        return f"{vid}/{v.payload.vertices[0]}"
    return vid


@dataclass
class GluingResult:
    complex: Complex
    report: dict


def glue(g: GraphOfSpaces, factor: float = DEFAULT_FACTOR, tol: float = TOL) -> GluingResult:
    """Run the whole construction; raises :class:`GluingError` at the failing stage."""
    norm = normalize_with_log(g)
    g = norm.graph
    validate_graph(g, tol)
    attest = check_malnormal_family(g)

    preps: dict[str, VertexPrep] = {}
    for vid in sorted(g.vertices):
        v = g.vertices[vid]
        if v.type == "M":
            preps[vid] = _prepare_vertex(v, g.incident_circles(vid), factor, tol)

    loop_lengths = {}
    for vid, p in preps.items():
        for eid, loop in p.loops.items():
            loop_lengths[eid] = loop_length(p.complex, loop)
    a_w = choose_circle_lengths(g, loop_lengths)

    b = ComplexBuilder()
    for vid in sorted(g.vertices):
        v = g.vertices[vid]
        if v.type == "M":
            K = preps[vid].complex
            for x in K.vertices:
                b.add_vertex(f"{vid}/{x}")
            for eid in sorted(K.edges):
                e = K.edges[eid]
                if eid < e.rev:
                    b.add_edge(f"{vid}/{e.src}", f"{vid}/{e.dst}", e.length, eid=f"{vid}/{eid}", rev=f"{vid}/{e.rev}")
            for tid in sorted(K.triangles):
                t = K.triangles[tid]
                b.add_triangle([f"{vid}/{s}" for s in t.sides], t.k, tid=f"{vid}/{tid}")
        elif v.type == "N":
            b.add_vertex(vid)
            b.add_edge(vid, vid, a_w[vid], eid=f"{vid}/loop", rev=f"{vid}/loop~")
        else:
            b.add_vertex(vid)

    annuli = {}
    meshes = {}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        if e.kind != "circle" or g.vertices[e.src].type != "N":
            continue
        m = g.edges[e.rev]
        prep = preps[m.src]
        loop = prep.loops[m.id]
        outer = [prep.complex.length(x) for x in loop.edges]
        mesh = build_annulus(outer, e.degree, a_w[e.src], prep.delta)
        emb = embed_annulus(b, mesh, e.src, f"{e.src}/loop", [f"{m.src}/{x}" for x in loop.edges], f"{e.id}/")
        base_sums, top_sums = annulus_angle_sums(mesh)
        meshes[e.id] = mesh
        annuli[e.id] = {
            "n_vertex": e.src,
            "m_vertex": m.src,
            "m_edge": m.id,
            "degree": e.degree,
            "theta": mesh.spec.theta,
            "A": mesh.spec.A,
            "C": mesh.spec.C,
            "corner_angle": mesh.spec.corner_angle,
            "k": mesh.spec.k,
            "quad": {"a": mesh.spec.quad.a, "c": mesh.spec.quad.c, "theta": mesh.spec.quad.theta, "k": mesh.spec.quad.k},
            "triangles": len(emb.triangles),
            "new_edges": len(mesh.rung_lengths),
            "geodesic_side_max_error": max(abs(s - math.pi) for s in base_sums),
            "outer_side_max_error": max((abs(s - math.pi) for s in top_sums[1:]), default=0.0),
            "corner_measured": top_sums[0],
            "boundary_length_error": {
                "outer": abs(math.fsum(outer) - mesh.spec.C),
                "geodesic": abs(a_w[e.src] * e.degree - mesh.spec.A),
            },
        }

    lines = []
    for a, r in g.edge_pairs():
        e = g.edges[a]
        if e.kind != "point":
            continue
        b.add_edge(basepoint(g, e.src), basepoint(g, e.dst), POINT_EDGE_LENGTH, eid=f"{a}/line", rev=f"{a}/line~")
        lines.append(a)

    out = b.build()
    diag = validate(out)
    if not diag.ok:
        raise GluingError("assembled complex is invalid: " + "; ".join(diag.problems), "assemble")
    link = check_link_condition(out, tol)
    aud = audit(out, g, preps, meshes, tol)

    report = {
        "schema_version": SCHEMA_VERSION,
        "normalization": norm.inserted,
        "malnormal_attestation": attest,
        "transversalization": {
            vid: {
                "loops": {eid: list(l.edges) for eid, l in p.loops.items()},
                "initial_intersections": p.transversal.initial_count if p.transversal else 0,
                "final_intersections": p.transversal.final_count if p.transversal else 0,
                "fins": [f.to_json() for f in p.transversal.fins] if p.transversal else [],
                "retraction": {k: list(v) for k, v in sorted(p.transversal.retraction.items())} if p.transversal else {},
                "extra_comparison": p.extra_comparison,
                "kbar": p.complex.kbar,
            }
            for vid, p in preps.items()
        },
        "delta_v": {vid: {"delta": _num(p.delta), "geodesic_excess": _num(p.geodesic_excess), "corner_floor": _num(p.corner_floor)} for vid, p in preps.items()},
        "a_w": a_w,
        "annuli": annuli,
        "point_edges": lines,
        "kbar": out.kbar,
        "link_condition": {
            "passed": link.passed,
            "tolerance": tol,
            "systole": {v: _num(s) for v, s in link.systoles.items()},
            "margin": {v: _num(m) for v, m in link.margins.items()},
            "min_systole": _num(link.min_systole),
        },
        "audit": aud,
    }
    report["verdict"] = "pass" if (link.passed and aud["euler"]["match"] and aud["surgery"]["ok"]) else "fail"
    return GluingResult(out, report)


def expected_euler(g: GraphOfSpaces) -> int:
    """Vertex spaces minus edge spaces: a point counts 1, a circle 0."""
    chi = 0
    for v in g.vertices.values():
        if v.type == "M":
            chi += euler_characteristic(v.payload)
        elif v.type == "P":
            chi += 1
    for a, _ in g.edge_pairs():
        if g.edges[a].kind == "point":
            chi -= 1
    return chi


def audit(out: Complex, g: GraphOfSpaces, preps: dict[str, VertexPrep], meshes: dict[str, AnnulusMesh], tol: float = TOL) -> dict:
    """Euler characteristic bookkeeping and the three link-surgery cases of the construction."""
    exp, act = expected_euler(g), euler_characteristic(out)
    n_sheets: dict[str, int] = {}
    for eid, mesh in meshes.items():
        w = g.edges[eid].src
        n_sheets[w] = n_sheets.get(w, 0) + mesh.degree
    link = check_link_condition(out, tol)
    n_cases = {}
    ok = True
    for w, sheets in sorted(n_sheets.items()):
        s = link.systoles[w]
        expect = TWO_PI if sheets >= 2 else math.inf
        good = (abs(s - expect) <= tol) if math.isfinite(expect) else math.isinf(s)
        ok &= good
        n_cases[w] = {"sheets": sheets, "systole": _num(s), "ok": good}
    m_cases = {}
    for vid, p in preps.items():
        if not p.loops:
            continue
        links: dict = {}
        old_min = math.inf
        for l in p.loops.values():
            old_min = min(old_min, is_closed_geodesic(p.complex, l, tol, links).min_angle)
        new_arcs = []
        for eid, mesh in meshes.items():
            if g.edges[eid].rev in p.loops:
                _, top = annulus_angle_sums(mesh)
                new_arcs.extend(top)
        min_arc = min(new_arcs, default=math.inf)
        d = p.delta
        good = old_min >= math.pi + 2 * d - tol and min_arc > math.pi - d
        ok &= good
        m_cases[vid] = {
            "delta": _num(d),
            "min_old_subtended": _num(old_min),
            "required_old": math.pi + 2 * d,
            "min_new_arc": _num(min_arc),
            "required_new_arc": math.pi - d,
            "path_bound": math.pi + d,
            "ok": good,
        }
    return {
        "euler": {"expected": exp, "actual": act, "match": exp == act},
        "surgery": {"n_vertices": n_cases, "m_vertices": m_cases, "ok": ok},
    }
