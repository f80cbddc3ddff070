"""Storage graphs and the regular / context-free / semilinear classifications.

A :class:`StorageGraph` marks each vertex looped (a copy of ℤ) or unlooped (a
copy of 𝔹); adjacent vertices commute.  Every negative verdict carries the
violated condition and a vertex witness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .monoids import Bicyclic, GraphProduct, Integers


def _pair(u, v) -> frozenset:
    if u == v:
        raise ValueError(f"self-pair {u!r} is not an edge; use a loop flag")
    return frozenset((u, v))


@dataclass(frozen=True)
class Graph:
    """A finite simple graph without loops."""

    vertices: tuple
    edges: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        edges = frozenset(e if isinstance(e, frozenset) else _pair(*e) for e in self.edges)
        vs = set(self.vertices)
        for e in edges:
            if len(e) != 2 or not e <= vs:
                raise ValueError(f"bad edge {sorted(map(str, e))}")
        object.__setattr__(self, "edges", edges)

    def adjacent(self, u, v) -> bool:
        return u != v and frozenset((u, v)) in self.edges

    def neighbours(self, v) -> set:
        return {u for e in self.edges if v in e for u in e if u != v}

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def induced(self, vs: Iterable) -> "Graph":
        keep = [v for v in self.vertices if v in set(vs)]
        ks = set(keep)
        return Graph(tuple(keep), frozenset(e for e in self.edges if e <= ks))

    def sorted_edges(self) -> list:
        order = {v: i for i, v in enumerate(self.vertices)}
        return sorted((tuple(sorted(e, key=order.get)) for e in self.edges), key=lambda p: (order[p[0]], order[p[1]]))


@dataclass(frozen=True)
class StorageGraph:
    vertices: tuple
    looped: frozenset = frozenset()
    edges: frozenset = frozenset()

    def __post_init__(self):
        g = Graph(self.vertices, self.edges)
        object.__setattr__(self, "vertices", g.vertices)
        object.__setattr__(self, "edges", g.edges)
        object.__setattr__(self, "looped", frozenset(self.looped))
        if not self.looped <= set(self.vertices):
            raise ValueError("looped vertices must be vertices")

    @property
    def underlying(self) -> Graph:
        return Graph(self.vertices, self.edges)

    def is_looped(self, v) -> bool:
        return v in self.looped

    def induced(self, vs: Iterable) -> "StorageGraph":
        g = self.underlying.induced(vs)
        return StorageGraph(g.vertices, self.looped & set(g.vertices), g.edges)


def storage_monoid(g: StorageGraph) -> GraphProduct:
    """The graph product MΓ; vertex ``g.vertices[i]`` becomes factor ``i``."""
    index = {v: i for i, v in enumerate(g.vertices)}
    factors = tuple(Integers() if v in g.looped else Bicyclic() for v in g.vertices)
    edges = frozenset(tuple(sorted(index[u] for u in e)) for e in g.edges)
    return GraphProduct(factors, edges)


@dataclass(frozen=True)
class VertexAnnotation:
    is_fri: bool
    is_context_free: bool
    j_trivial: bool = False


@dataclass(frozen=True)
class AnnotatedProductGraph:
    graph: Graph
    annotations: Mapping = field(default_factory=dict)

    def __post_init__(self):
        missing = set(self.graph.vertices) - set(self.annotations)
        if missing:
            raise ValueError(f"vertices without annotation: {sorted(map(str, missing))}")

    def annot(self, v) -> VertexAnnotation:
        return self.annotations[v]


# ---------------------------------------------------------------------------
# structural checks


@dataclass(frozen=True)
class ChordalResult:
    chordal: bool
    elimination_order: tuple | None = None
    induced_cycle: tuple | None = None

    def __bool__(self):
        return self.chordal


def is_chordal(g: Graph) -> ChordalResult:
    """Simplicial elimination; on failure an induced cycle of length >= 4."""
    adj = g.adjacency()
    alive = list(g.vertices)
    order = []
    while alive:
        live = set(alive)
        for v in alive:
            nb = adj[v] & live
            if all(b in adj[a] for a, b in combinations(nb, 2)):
                order.append(v)
                alive.remove(v)
                break
        else:
            return ChordalResult(False, None, _induced_cycle(adj, alive))
    return ChordalResult(True, tuple(order), None)


def _induced_cycle(adj: dict, alive: list) -> tuple:
    live = set(alive)
    for v in alive:
        nb = sorted(adj[v] & live, key=alive.index)
        for a, b in combinations(nb, 2):
            if b in adj[a]:
                continue
            blocked = (adj[v] | {v}) - {a, b}
            path = _shortest_path(adj, a, b, live - blocked)
            if path:
                return (v,) + path
    raise AssertionError("no simplicial vertex but no induced cycle")


def _shortest_path(adj: dict, a, b, allowed: set):
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return tuple(reversed(path))
        for y in adj[x]:
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    return None


PATTERNS = ("C4", "P4")


def find_induced(g: Graph, pattern: str):
    """A 4-vertex witness ordered along the pattern, or None."""
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    adj = g.adjacency()
    for quad in combinations(g.vertices, 4):
        deg = {v: len(adj[v] & set(quad)) for v in quad}
        m = sum(deg.values()) // 2
        if pattern == "C4" and m == 4 and all(d == 2 for d in deg.values()):
            a = quad[0]
            b, d = sorted(adj[a] & set(quad), key=quad.index)
            (c,) = set(quad) - {a, b, d}
            return (a, b, c, d)
        if pattern == "P4" and m == 3 and sorted(deg.values()) == [1, 1, 2, 2]:
            a = next(v for v in quad if deg[v] == 1)
            path = [a]
            while len(path) < 4:
                (nxt,) = (adj[path[-1]] & set(quad)) - set(path)
                path.append(nxt)
            return tuple(path)
    return None


def has_induced(g: Graph, pattern: str) -> bool:
    return find_induced(g, pattern) is not None


def is_transitive_forest(g: Graph) -> bool:
    return not has_induced(g, "C4") and not has_induced(g, "P4")


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    holds: bool
    name: str
    condition: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.holds

    def as_dict(self) -> dict:
        out = {"verdict": self.name}
        if self.condition is not None:
            out["condition"] = self.condition
            out["witness"] = list(self.witness)
        return out


def _ok(name):
    return Verdict(True, name)


def _fail(name, condition, witness):
    return Verdict(False, name, condition, tuple(witness))


def classify_regular(g: StorageGraph) -> Verdict:
    # neither 𝔹 nor ℤ is FRI, so any vertex already breaks regularity
    if not g.vertices:
        return _ok("Regular")
    return _fail("NotRegular", "non-FRI vertex", (g.vertices[0],))


def classify_semilinear(g: StorageGraph) -> Verdict:
    adj = g.underlying.adjacency()
    unlooped = [v for v in g.vertices if v not in g.looped]
    for u, v in combinations(unlooped, 2):
        if v in adj[u]:
            return _fail("NotSemilinear", "B-pair", (u, v))
    for v in unlooped:
        nb = [u for u in g.vertices if u in adj[v] and u in g.looped]
        for u, w in combinations(nb, 2):
            if w not in adj[u]:
                return _fail("NotSemilinear", "BZZ-triangle", (v, u, w))
    for pattern in PATTERNS:
        wit = find_induced(g.underlying, pattern)
        if wit:
            return _fail("NotSemilinear", pattern, wit)
    return _ok("AllSemilinear")


def classify_context_free(g: AnnotatedProductGraph) -> Verdict:
    keep = [v for v in g.graph.vertices if not g.annot(v).j_trivial]
    h = g.graph.induced(keep)
    adj = h.adjacency()
    fri = {v: g.annot(v).is_fri for v in keep}
    for v in keep:
        if not g.annot(v).is_context_free:
            return _fail("NotContextFree", "1", (v,))
    for u, v in combinations(keep, 2):
        if not fri[u] and not fri[v] and v in adj[u]:
            return _fail("NotContextFree", "2", (u, v))
    for v in keep:
        if fri[v]:
            continue
        nb = [u for u in keep if u in adj[v] and fri[u]]
        for u, w in combinations(nb, 2):
            if w not in adj[u]:
                return _fail("NotContextFree", "3", (v, u, w))
    ch = is_chordal(h)
    if not ch:
        return _fail("NotContextFree", "4", ch.induced_cycle)
    return _ok("ContextFree")
