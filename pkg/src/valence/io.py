"""JSON encodings for monoids, elements, automata, graphs, semilinear sets and amalgams."""

from __future__ import annotations

import json
from typing import Any

from .amalgam import AmalgamSpec, FiniteSubgroup
from .automata import Edge, ValenceAutomaton, tokenize
from .graphs import AnnotatedProductGraph, Graph, StorageGraph, VertexAnnotation
from .monoids import (
    Bicyclic,
    DirectProduct,
    GraphProduct,
    Grigorchuk,
    Integers,
    MonoidElement,
    MonoidError,
    PermGroup,
    element,
    identity,
    product_of,
)
from .semilinear import LinearSet, Multiset, SemilinearSet


class InputError(ValueError):
    """Malformed or inconsistent JSON input."""


def loads(text: str, what: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{what}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    return loads(text, path)


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, no trailing spaces."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def _need(data: dict, key: str, what: str):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{what}: missing field {key!r}")
    return data[key]


# ---------------------------------------------------------------------------
# monoids and elements


def monoid_from_json(data: Any):
    if not isinstance(data, dict):
        raise InputError(f"monoid must be an object, got {data!r}")
    if "graph_product" in data or data.get("kind") == "graph_product":
        return _graph_product_from_json(data.get("graph_product", data.get("graph")))
    if "direct_product" in data or data.get("kind") == "direct_product":
        parts = data.get("direct_product", data.get("factors"))
        if not isinstance(parts, list) or not parts:
            raise InputError("direct_product needs a non-empty factor list")
        return DirectProduct(tuple(monoid_from_json(p) for p in parts))
    kind = data.get("kind")
    if kind == "bicyclic":
        return Bicyclic()
    if kind == "integers":
        return Integers()
    if kind == "perm":
        degree = data.get("degree")
        if not isinstance(degree, int) or degree < 1:
            raise InputError("perm monoid needs a positive integer degree")
        return PermGroup(degree)
    if kind == "trivial":
        return PermGroup(1)
    if kind == "grigorchuk":
        return Grigorchuk()
    raise InputError(f"unknown monoid kind {kind!r}")


def _graph_product_from_json(g: Any) -> GraphProduct:
    if not isinstance(g, dict):
        raise InputError("graph_product needs an object")
    try:
        if "factors" in g:
            factors = tuple(monoid_from_json(f) for f in g["factors"])
            edges = frozenset(tuple(sorted(e)) for e in g.get("edges", []))
            return GraphProduct(factors, edges)
        from .graphs import storage_monoid

        return storage_monoid(graph_from_json(g))
    except MonoidError as e:
        raise InputError(str(e)) from None


def monoid_to_json(m) -> dict:
    if isinstance(m, Bicyclic):
        return {"kind": "bicyclic"}
    if isinstance(m, Integers):
        return {"kind": "integers"}
    if isinstance(m, PermGroup):
        return {"kind": "perm", "degree": m.degree}
    if isinstance(m, Grigorchuk):
        return {"kind": "grigorchuk"}
    if isinstance(m, GraphProduct):
        return {
            "graph_product": {
                "factors": [monoid_to_json(f) for f in m.factors],
                "edges": sorted([list(e) for e in m.edges]),
            }
        }
    if isinstance(m, DirectProduct):
        return {"direct_product": [monoid_to_json(f) for f in m.factors]}
    raise InputError(f"cannot serialise monoid {m!r}")


def element_from_json(m, data: Any) -> MonoidElement:
    try:
        return _element_from_json(m, data)
    except (MonoidError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"bad {m.kind} element {data!r}: {e}") from None


def _element_from_json(m, data):
    if data is None:
        return identity(m)
    if isinstance(m, Grigorchuk):
        if not isinstance(data, str):
            raise InputError("Grigorchuk elements are words over abcd")
        return element(m, data)
    if isinstance(data, str):
        gens = m.generators()
        names = tokenize(list(gens), data)
        return product_of(m, [MonoidElement(m, gens[n]) for n in names])
    if isinstance(m, Bicyclic):
        return element(m, tuple(data))
    if isinstance(m, Integers):
        return element(m, data)
    if isinstance(m, PermGroup):
        return element(m, tuple(data))
    if isinstance(m, GraphProduct):
        letters = []
        for x in data:
            if isinstance(x, dict):
                sign = {"+": 1, "-": -1}.get(x.get("sign"))
                if sign is None:
                    raise InputError(f"bad sign in {x!r}")
                letters.append((x.get("vertex"), sign))
            else:
                letters.append(tuple(x))
        from .monoids import reduce

        return element(m, reduce(m, letters))
    if isinstance(m, DirectProduct):
        if not isinstance(data, list) or len(data) != len(m.factors):
            raise InputError("direct product element needs one entry per factor")
        parts = [_element_from_json(f, d).payload for f, d in zip(m.factors, data)]
        return element(m, tuple(parts))
    raise InputError(f"unsupported monoid {m!r}")


def element_to_json(x: MonoidElement) -> Any:
    return _payload_to_json(x.monoid, x.payload)


def _payload_to_json(m, p):
    if isinstance(m, (Bicyclic, PermGroup)):
        return list(p)
    if isinstance(m, (Integers, Grigorchuk)):
        return p
    if isinstance(m, GraphProduct):
        return [{"vertex": v, "sign": "+" if s > 0 else "-"} for v, s in p]
    if isinstance(m, DirectProduct):
        return [_payload_to_json(f, a) for f, a in zip(m.factors, p)]
    raise InputError(f"cannot serialise element of {m!r}")


# ---------------------------------------------------------------------------
# automata


def _state(x):
    if isinstance(x, (str, int)):
        return x
    raise InputError(f"state ids must be strings or integers, got {x!r}")


def automaton_from_json(data: Any) -> ValenceAutomaton:
    what = "automaton"
    monoid = monoid_from_json(_need(data, "monoid", what))
    alphabet = tuple(_need(data, "alphabet", what))
    states = tuple(_state(q) for q in _need(data, "states", what))
    edges = []
    for n, e in enumerate(_need(data, "edges", what)):
        src = _state(_need(e, "from", f"edge {n}"))
        dst = _state(_need(e, "to", f"edge {n}"))
        raw = e.get("input", "")
        try:
            word = tokenize(alphabet, raw)
        except ValueError as err:
            raise InputError(f"edge {n}: {err}") from None
        edges.append(Edge(src, word, element_from_json(monoid, e.get("element")), dst))
    try:
        return ValenceAutomaton(
            states, alphabet, monoid, tuple(edges), _state(_need(data, "initial", what)),
            frozenset(_state(q) for q in data.get("finals", [])),
        )
    except (ValueError, MonoidError) as err:
        raise InputError(f"{what}: {err}") from None


def _word_to_json(alphabet, word):
    text = "".join(map(str, word))
    try:
        if tokenize(alphabet, text) == tuple(word):
            return text
    except ValueError:
        pass
    return list(word)


def _state_json(q):
    return q if isinstance(q, (str, int)) else str(q)


def automaton_to_json(A: ValenceAutomaton) -> dict:
    return {
        "states": [_state_json(q) for q in A.states],
        "alphabet": list(A.alphabet),
        "monoid": monoid_to_json(A.monoid),
        "edges": [
            {
                "from": _state_json(e.source),
                "input": _word_to_json(A.alphabet, e.word),
                "element": element_to_json(e.element),
                "to": _state_json(e.target),
            }
            for e in A.edges
        ],
        "initial": _state_json(A.initial),
        "finals": sorted((_state_json(q) for q in A.finals), key=str),
    }


# ---------------------------------------------------------------------------
# graphs


def _vertices(data, what):
    vs = _need(data, "vertices", what)
    if not isinstance(vs, list):
        raise InputError(f"{what}: vertices must be a list")
    out = []
    for v in vs:
        if isinstance(v, dict):
            out.append(v)
        else:
            out.append({"id": v})
    return out


def graph_from_json(data: Any) -> StorageGraph:
    vs = _vertices(data, "graph")
    try:
        return StorageGraph(
            tuple(v["id"] for v in vs),
            frozenset(v["id"] for v in vs if v.get("looped", False)),
            frozenset(frozenset(e) for e in data.get("edges", [])),
        )
    except (KeyError, ValueError, TypeError) as err:
        raise InputError(f"graph: {err}") from None


def annotated_from_json(data: Any) -> AnnotatedProductGraph:
    vs = _vertices(data, "graph")
    ann = {}
    for v in vs:
        a = v.get("annot")
        if not isinstance(a, dict):
            raise InputError(f"vertex {v.get('id')!r} has no annotation")
        try:
            ann[v["id"]] = VertexAnnotation(bool(a["is_fri"]), bool(a["is_context_free"]), bool(a.get("j_trivial", False)))
        except KeyError as err:
            raise InputError(f"vertex {v.get('id')!r}: missing annotation {err}") from None
    try:
        g = Graph(tuple(v["id"] for v in vs), frozenset(frozenset(e) for e in data.get("edges", [])))
        return AnnotatedProductGraph(g, ann)
    except ValueError as err:
        raise InputError(f"graph: {err}") from None


def graph_to_json(g) -> dict:
    if isinstance(g, AnnotatedProductGraph):
        vs = [
            {"id": v, "annot": {"is_fri": a.is_fri, "is_context_free": a.is_context_free, "j_trivial": a.j_trivial}}
            for v, a in ((v, g.annot(v)) for v in g.graph.vertices)
        ]
        return {"vertices": vs, "edges": [list(e) for e in g.graph.sorted_edges()]}
    vs = [{"id": v, "looped": v in g.looped} for v in g.vertices]
    return {"vertices": vs, "edges": [list(e) for e in g.underlying.sorted_edges()]}


# ---------------------------------------------------------------------------
# semilinear sets


def _sparse(alphabet, counts) -> dict:
    return {x: c for x, c in zip(alphabet, counts) if c}


def _dense(alphabet, data, what) -> tuple:
    if not isinstance(data, dict):
        raise InputError(f"{what}: expected an object of counts")
    unknown = set(data) - set(alphabet)
    if unknown:
        raise InputError(f"{what}: symbols {sorted(unknown)} not in alphabet")
    vals = tuple(data.get(x, 0) for x in alphabet)
    if any(not isinstance(c, int) or c < 0 for c in vals):
        raise InputError(f"{what}: counts must be non-negative integers")
    return vals


def semilinear_from_json(data: Any) -> SemilinearSet:
    alphabet = tuple(_need(data, "alphabet", "semilinear set"))
    comps = []
    for n, c in enumerate(_need(data, "components", "semilinear set")):
        base = _dense(alphabet, c.get("base", {}), f"component {n} base")
        periods = tuple(_dense(alphabet, p, f"component {n} period") for p in c.get("periods", []))
        comps.append(LinearSet(base, periods))
    return SemilinearSet(alphabet, tuple(comps))


def semilinear_to_json(s: SemilinearSet) -> dict:
    s = s.canonical()
    return {
        "alphabet": list(s.alphabet),
        "components": [
            {"base": _sparse(s.alphabet, c.base), "periods": [_sparse(s.alphabet, p) for p in c.periods]}
            for c in s.components
        ],
    }


def multiset_from_json(alphabet, data) -> Multiset:
    return Multiset(tuple(alphabet), _dense(alphabet, data, "multiset"))


def multiset_to_json(m: Multiset) -> dict:
    return m.as_dict()


# ---------------------------------------------------------------------------
# amalgams


def amalgam_from_json(data: Any) -> AmalgamSpec:
    factors = _need(data, "factors", "amalgam")
    alphabets = _need(data, "alphabets", "amalgam")
    if len(factors) != 2 or len(alphabets) != 2:
        raise InputError("amalgam: exactly two factors and two alphabets")
    ms = tuple(monoid_from_json(f) for f in factors)
    X = tuple({x: element_from_json(m, v) for x, v in a.items()} for m, a in zip(ms, alphabets))
    sub = data.get("subgroup")
    F = None
    if sub is not None:
        labels = tuple(_need(sub, "labels", "subgroup"))
        emb = tuple({f: element_from_json(m, e[f]) for f in labels} for m, e in zip(ms, _need(sub, "embed", "subgroup")))
        syms = tuple(sub.get("symbols", [{}, {}]))
        F = FiniteSubgroup(labels, emb, syms)
    try:
        return AmalgamSpec(ms, X, F)
    except (ValueError, MonoidError) as err:
        raise InputError(f"amalgam: {err}") from None


def amalgam_to_json(spec: AmalgamSpec) -> dict:
    given = ({}, {}) if spec.subgroup is None else spec.subgroup.symbols
    generated = [set(spec.y_symbols[i].values()) - set(given[i].values()) for i in (0, 1)]
    out = {
        "factors": [monoid_to_json(m) for m in spec.factors],
        "alphabets": [
            {x: element_to_json(g) for x, g in a.items() if x not in generated[i]}
            for i, a in enumerate(spec.alphabets)
        ],
        "subgroup": None,
    }
    if spec.subgroup is not None:
        F = spec.subgroup
        out["subgroup"] = {
            "labels": list(F.labels),
            "embed": [{f: element_to_json(e[f]) for f in F.labels} for e in F.embed],
            "symbols": [dict(s) for s in F.symbols],
        }
    return out
