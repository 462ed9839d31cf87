"""Instance generators: roses, doubles of free groups, graphs of roses."""

from __future__ import annotations

import string

from negcurv.complex import Complex, ComplexBuilder
from negcurv.geodesics import ClosedLoop, CyclicWord, LoopError, is_proper_power
from negcurv.gluing import GEdge, GraphOfSpaces, GVertex, check_malnormal_family, normalize


class RecipeError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


def rose(n: int, lengths=None, vertex: str = "v") -> Complex:
    """One vertex with ``n`` loop edges named ``a, b, ...`` (reverses ``A, B, ...``)."""
    if not 1 <= n <= 26:
        raise RecipeError(f"rose needs between 1 and 26 petals, got {n}")
    lengths = [1.0] * n if lengths is None else [float(x) for x in lengths]
    if len(lengths) != n or min(lengths) <= 0:
        raise RecipeError("rose needs one positive length per petal")
    b = ComplexBuilder()
    b.add_vertex(vertex)
    for i, l in enumerate(lengths):
        x = string.ascii_lowercase[i]
        b.add_edge(vertex, vertex, l, eid=x, rev=x.upper())
    return b.build()


def rank_of(word: str) -> int:
    return max(string.ascii_lowercase.index(x.lower()) for x in word) + 1


def word_loop(word: str | CyclicWord) -> ClosedLoop:
    """The edge loop spelled by ``word`` on a rose built by :func:`rose`."""
    w = word if isinstance(word, CyclicWord) else CyclicWord.parse(word)
    return ClosedLoop(w.letters)


def _parse_word(word: str) -> CyclicWord:
    try:
        return CyclicWord.parse(word)
    except LoopError as exc:
        raise RecipeError(str(exc), {"word": word}) from None


def double(word: str, lengths=None) -> GraphOfSpaces:
    """Two copies of a rose amalgamated along the cyclic subgroup generated by ``word``."""
    w = _parse_word(word)
    if is_proper_power(w):
        raise RecipeError(f"{word} is a proper power, so its cyclic subgroup is not malnormal",
                          {"word": word, "kind": "proper power"})
    n = rank_of(word) if lengths is None else len(lengths)
    if lengths is not None and rank_of(word) > n:
        raise RecipeError("word uses more generators than lengths supplied")
    K = rose(n, lengths)
    loop = word_loop(w)
    g = GraphOfSpaces(
        {"u": GVertex("u", "M", K), "v": GVertex("v", "M", K), "w": GVertex("w", "N")},
        {
            "e1": GEdge("e1", "e1~", "u", "w", "circle", gamma=loop),
            "e1~": GEdge("e1~", "e1", "w", "u", "circle", degree=1),
            "e2": GEdge("e2", "e2~", "v", "w", "circle", gamma=loop),
            "e2~": GEdge("e2~", "e2", "w", "v", "circle", degree=1),
        },
    )
    return g


def graph_of_roses(spec: dict) -> GraphOfSpaces:
    """Build a graph of roses from the recipe mini-language.

    ``spec`` has ``roses`` (``{id, rank, lengths?}``), optional ``circles`` and
    ``points`` (lists of vertex ids) and ``edges``. An edge is
    ``{from, to, point: true}`` or ``{from, to, word, to_word | degree}``:
    ``word`` attaches at ``from`` (a rose) and ``to_word`` or ``degree`` at
    ``to`` (a rose or a circle). The result is normalized and checked for
    malnormality.
    """
    verts: dict[str, GVertex] = {}
    for r in spec.get("roses", []):
        rid = str(r["id"])
        verts[rid] = GVertex(rid, "M", rose(int(r.get("rank", 2)), r.get("lengths"), vertex="v"))
    for c in spec.get("circles", []):
        verts[str(c)] = GVertex(str(c), "N")
    for p in spec.get("points", []):
        verts[str(p)] = GVertex(str(p), "P")
    edges: dict[str, GEdge] = {}
    for n, e in enumerate(spec.get("edges", [])):
        eid = str(e.get("id", f"g{n}"))
        src, dst = str(e["from"]), str(e["to"])
        for x in (src, dst):
            if x not in verts:
                raise RecipeError(f"edge {eid}: unknown vertex {x!r}")
        if e.get("point"):
            edges[eid] = GEdge(eid, f"{eid}~", src, dst, "point")
            edges[f"{eid}~"] = GEdge(f"{eid}~", eid, dst, src, "point")
            continue
        ends = {}
        for side, v, wkey in ((0, src, "word"), (1, dst, "to_word")):
            if verts[v].type == "M":
                if wkey not in e:
                    raise RecipeError(f"edge {eid}: rose end {v} needs {wkey!r}")
                w = _parse_word(e[wkey])
                if rank_of(str(w)) > len(verts[v].payload.edges) // 2:
                    raise RecipeError(f"edge {eid}: word {w} uses generators missing from rose {v}")
                ends[side] = {"gamma": word_loop(w)}
            elif verts[v].type == "N":
                ends[side] = {"degree": int(e.get("degree", 1))}
            else:
                raise RecipeError(f"edge {eid}: circle edge cannot end at point vertex {v}")
        edges[eid] = GEdge(eid, f"{eid}~", src, dst, "circle", **ends[0])
        edges[f"{eid}~"] = GEdge(f"{eid}~", eid, dst, src, "circle", **ends[1])
    g = normalize(GraphOfSpaces(verts, edges))
    try:
        check_malnormal_family(g)
    except ValueError as exc:
        raise RecipeError(str(exc), getattr(exc, "witness", {})) from None
    return g
