import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import induced_cycle_brute, semilinear_brute
from valence.graphs import (
    AnnotatedProductGraph,
    Graph,
    StorageGraph,
    VertexAnnotation,
    classify_context_free,
    classify_regular,
    classify_semilinear,
    find_induced,
    has_induced,
    is_chordal,
    is_transitive_forest,
    storage_monoid,
)
from valence.monoids import Bicyclic, Integers


def cycle(n):
    return Graph(tuple(range(n)), frozenset(frozenset((i, (i + 1) % n)) for i in range(n)))


def path(n):
    return Graph(tuple(range(n)), frozenset(frozenset((i, i + 1)) for i in range(n - 1)))


def clique(n):
    return Graph(tuple(range(n)), frozenset(frozenset(p) for p in itertools.combinations(range(n), 2)))


def test_c4_not_chordal_with_witness():
    res = is_chordal(cycle(4))
    assert not res
    assert len(res.induced_cycle) == 4


@pytest.mark.parametrize("n", range(1, 6))
def test_cliques_chordal(n):
    assert is_chordal(clique(n))


def test_tree_chordal():
    tree = Graph(tuple(range(6)), frozenset(map(frozenset, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])))
    assert is_chordal(tree)
    assert not induced_cycle_brute(tree.vertices, tree.edges)


def test_patterns():
    assert has_induced(path(4), "P4") and not has_induced(path(4), "C4")
    assert not has_induced(clique(4), "P4") and not has_induced(clique(4), "C4")


def test_chorded_c4_is_a_diamond():
    # the only 4-subset has 5 edges, so neither a P4 (3 edges) nor a C4 is induced
    chorded = Graph(cycle(4).vertices, cycle(4).edges | {frozenset((0, 2))})
    assert len(chorded.edges) == 5
    assert not has_induced(chorded, "P4") and not has_induced(chorded, "C4")
    # one more vertex hanging off a degree-2 corner creates an induced P4
    tail = Graph(chorded.vertices + (4,), chorded.edges | {frozenset((1, 4))})
    assert find_induced(tail, "P4") is not None and not has_induced(tail, "C4")


def test_transitive_forest():
    assert not is_transitive_forest(cycle(4))
    assert is_transitive_forest(Graph((0,)))
    two = Graph(tuple(range(6)), clique(3).edges | {frozenset((a + 3, b + 3)) for a, b in itertools.combinations(range(3), 2)})
    assert is_transitive_forest(two)


def test_self_pair_rejected():
    with pytest.raises(ValueError):
        Graph((0,), frozenset({(0, 0)}))


def test_regular():
    assert classify_regular(StorageGraph(())).holds
    assert not classify_regular(StorageGraph(("v",))).holds
    assert not classify_regular(StorageGraph(("v",), {"v"})).holds


def test_storage_monoid_factors():
    gp = storage_monoid(StorageGraph(("u", "v"), {"v"}, {("u", "v")}))
    assert isinstance(gp.factors[0], Bicyclic) and isinstance(gp.factors[1], Integers)
    assert gp.edges == frozenset({(0, 1)})


def _ann(fri, cf=True, j=False):
    return VertexAnnotation(fri, cf, j)


def test_context_free_examples():
    g = Graph(("u", "v"), {("u", "v")})
    v = classify_context_free(AnnotatedProductGraph(g, {"u": _ann(False), "v": _ann(False)}))
    assert v.condition == "2"
    assert classify_context_free(AnnotatedProductGraph(clique(4), {i: _ann(True) for i in range(4)})).holds
    g3 = Graph(("v", "u", "w"), {("v", "u"), ("v", "w")})
    v3 = classify_context_free(AnnotatedProductGraph(g3, {"v": _ann(False), "u": _ann(True), "w": _ann(True)}))
    assert v3.condition == "3" and set(v3.witness) == {"v", "u", "w"}
    v4 = classify_context_free(AnnotatedProductGraph(cycle(4), {i: _ann(True) for i in range(4)}))
    assert v4.condition == "4" and len(v4.witness) == 4


def test_j_trivial_vertices_dropped():
    # a trivial factor at the centre of a C4 does not matter once removed
    g = Graph(tuple(range(4)), cycle(4).edges)
    ann = {i: _ann(True) for i in range(4)}
    ann[0] = _ann(True, True, True)
    assert classify_context_free(AnnotatedProductGraph(g, ann)).holds


def _witness_valid(g: StorageGraph, verdict):
    adj = lambda a, b: g.underlying.adjacent(a, b)
    w = verdict.witness
    if verdict.condition == "B-pair":
        return adj(*w) and not any(v in g.looped for v in w)
    if verdict.condition == "BZZ-triangle":
        v, u, x = w
        return v not in g.looped and u in g.looped and x in g.looped and adj(v, u) and adj(v, x) and not adj(u, x)
    if verdict.condition == "P4":
        a, b, c, d = w
        return adj(a, b) and adj(b, c) and adj(c, d) and not adj(a, c) and not adj(b, d) and not adj(a, d)
    if verdict.condition == "C4":
        a, b, c, d = w
        return adj(a, b) and adj(b, c) and adj(c, d) and adj(d, a) and not adj(a, c) and not adj(b, d)
    return False


@st.composite
def storage_graphs(draw, max_n):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = [p for p in pairs if draw(st.booleans())]
    looped = [v for v in range(n) if draw(st.booleans())]
    return StorageGraph(tuple(range(n)), frozenset(looped), frozenset(frozenset(e) for e in edges))


@settings(max_examples=300, deadline=None)
@given(storage_graphs(6))
def test_semilinear_matches_brute_force(g):
    v = classify_semilinear(g)
    assert v.holds == semilinear_brute(g.vertices, g.looped, g.edges)
    if not v.holds:
        assert _witness_valid(g, v)


@settings(max_examples=300, deadline=None)
@given(storage_graphs(7))
def test_chordal_matches_brute_force(g):
    res = is_chordal(g.underlying)
    assert res.chordal == (not induced_cycle_brute(g.vertices, g.edges))
    if res.chordal:
        # each vertex is simplicial among those eliminated after it
        order = res.elimination_order
        for i, v in enumerate(order):
            later = [u for u in order[i + 1 :] if g.underlying.adjacent(u, v)]
            assert all(g.underlying.adjacent(a, b) for a, b in itertools.combinations(later, 2))
    else:
        cyc = res.induced_cycle
        n = len(cyc)
        assert n >= 4
        for i, j in itertools.combinations(range(n), 2):
            along = j == i + 1 or (i == 0 and j == n - 1)
            assert g.underlying.adjacent(cyc[i], cyc[j]) == along


@settings(max_examples=200, deadline=None)
@given(storage_graphs(6))
def test_find_induced_witness_is_induced(g):
    for pattern in ("C4", "P4"):
        w = find_induced(g.underlying, pattern)
        if w is not None:
            sub = g.induced(w)
            assert len(sub.edges) == (4 if pattern == "C4" else 3)
