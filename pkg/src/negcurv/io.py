"""JSON (de)serialization for complexes, loops, graphs of spaces and reports.

Floats go through :func:`json.dumps`, which writes the shortest decimal that
round-trips, so lengths and curvatures survive bit-exactly. Infinite values
are written as the strings ``"inf"``/``"-inf"``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from negcurv.complex import Complex, Edge, Triangle
from negcurv.geodesics import ClosedLoop
from negcurv.gluing import SCHEMA_VERSION, GEdge, GraphOfSpaces, GVertex


class FormatError(ValueError):
    """Malformed input document; ``location`` is a JSON-pointer-like path."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location or '(root)'}: {message}")
        self.location = location


def _get(d, key, where):
    if not isinstance(d, dict):
        raise FormatError("expected an object", where)
    if key not in d:
        raise FormatError(f"missing field {key!r}", where)
    return d[key]


def _list(d, key, where):
    v = _get(d, key, where)
    if not isinstance(v, list):
        raise FormatError(f"{key!r} must be a list", f"{where}/{key}")
    return v


def _num(x, where) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError("expected a number", where)
    return float(x)


def complex_to_json(K: Complex) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "vertices": list(K.vertices),
        "edges": [
            {"id": e.id, "rev": e.rev, "src": e.src, "dst": e.dst, "len": e.length}
            for e in (K.edges[i] for i in sorted(K.edges))
        ],
        "triangles": [
            {"id": t.id, "sides": list(t.sides), "k": t.k} for t in (K.triangles[i] for i in sorted(K.triangles))
        ],
    }


def complex_from_json(d: dict, where: str = "") -> Complex:
    verts = tuple(str(v) for v in _list(d, "vertices", where))
    edges = {}
    for n, e in enumerate(_list(d, "edges", where)):
        w = f"{where}/edges/{n}"
        eid = str(_get(e, "id", w))
        if eid in edges:
            raise FormatError(f"duplicate edge id {eid!r}", w)
        edges[eid] = Edge(eid, str(_get(e, "rev", w)), str(_get(e, "src", w)), str(_get(e, "dst", w)),
                          _num(_get(e, "len", w), f"{w}/len"))
    tris = {}
    for n, t in enumerate(d.get("triangles", [])):
        w = f"{where}/triangles/{n}"
        sides = _get(t, "sides", w)
        if not isinstance(sides, list) or len(sides) != 3:
            raise FormatError("sides must list three edge ids", f"{w}/sides")
        tid = str(t.get("id", n))
        if tid in tris:
            raise FormatError(f"duplicate triangle id {tid!r}", w)
        tris[tid] = Triangle(tid, tuple(str(s) for s in sides), _num(_get(t, "k", w), f"{w}/k"))
    return Complex(verts, edges, tris)


def loop_to_json(loop: ClosedLoop) -> list:
    return list(loop.edges)


def loop_from_json(d, where: str = "") -> ClosedLoop:
    if isinstance(d, dict):
        d = _get(d, "loop", where)
    if not isinstance(d, list) or not d:
        raise FormatError("a loop is a non-empty list of edge ids", where)
    return ClosedLoop(tuple(str(x) for x in d))


def loops_from_json(d, where: str = "") -> list[ClosedLoop]:
    if isinstance(d, dict):
        d = _get(d, "loops", where)
    if not isinstance(d, list):
        raise FormatError("expected a list of loops", where)
    return [loop_from_json(x, f"{where}/{n}") for n, x in enumerate(d)]


def gos_to_json(g: GraphOfSpaces) -> dict:
    verts = []
    for vid in sorted(g.vertices):
        v = g.vertices[vid]
        rec = {"id": v.id, "type": v.type}
        if v.payload is not None:
            rec["payload"] = complex_to_json(v.payload)
        verts.append(rec)
    edges = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        rec = {"id": e.id, "rev": e.rev, "src": e.src, "dst": e.dst, "kind": e.kind}
        if e.gamma is not None:
            rec["gamma"] = loop_to_json(e.gamma)
        if e.degree is not None:
            rec["degree"] = e.degree
        edges.append(rec)
    return {"schema_version": SCHEMA_VERSION, "vertices": verts, "edges": edges}


def gos_from_json(d: dict) -> GraphOfSpaces:
    verts = {}
    for n, v in enumerate(_list(d, "vertices", "")):
        w = f"/vertices/{n}"
        vid = str(_get(v, "id", w))
        typ = _get(v, "type", w)
        if typ not in ("P", "N", "M"):
            raise FormatError(f"type must be P, N or M, got {typ!r}", f"{w}/type")
        payload = complex_from_json(v["payload"], f"{w}/payload") if "payload" in v else None
        if typ == "M" and payload is None:
            raise FormatError("type M vertex needs a payload", w)
        verts[vid] = GVertex(vid, typ, payload)
    edges = {}
    for n, e in enumerate(_list(d, "edges", "")):
        w = f"/edges/{n}"
        eid = str(_get(e, "id", w))
        kind = _get(e, "kind", w)
        if kind not in ("circle", "point"):
            raise FormatError(f"kind must be circle or point, got {kind!r}", f"{w}/kind")
        gamma = loop_from_json(e["gamma"], f"{w}/gamma") if "gamma" in e else None
        deg = e.get("degree")
        if deg is not None and (isinstance(deg, bool) or not isinstance(deg, int)):
            raise FormatError("degree must be an integer", f"{w}/degree")
        edges[eid] = GEdge(eid, str(_get(e, "rev", w)), str(_get(e, "src", w)), str(_get(e, "dst", w)), kind, gamma, deg)
    return GraphOfSpaces(verts, edges)


def jsonable(x):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_json(path: str | Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
