"""Which graph products of bicyclic and integer storage keep Parikh images
semilinear, and which give context-free languages."""

from valence import AnnotatedProductGraph, Graph, StorageGraph, VertexAnnotation
from valence import classify_context_free, classify_semilinear, is_chordal

graphs = {
    "two blind counters (looped edge)": StorageGraph(("u", "v"), {"u", "v"}, {("u", "v")}),
    "two partially blind counters": StorageGraph(("u", "v"), set(), {("u", "v")}),
    "B next to two non-adjacent Z": StorageGraph(("b", "z1", "z2"), {"z1", "z2"}, {("b", "z1"), ("b", "z2")}),
    "looped four-cycle": StorageGraph(
        ("a", "b", "c", "d"), {"a", "b", "c", "d"}, {("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")}
    ),
    "looped path of length three": StorageGraph(
        ("a", "b", "c", "d"), {"a", "b", "c", "d"}, {("a", "b"), ("b", "c"), ("c", "d")}
    ),
}
for name, g in graphs.items():
    print(f"{name:36}", classify_semilinear(g).as_dict())

print()
c4 = Graph(("a", "b", "c", "d"), {("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")})
print("C4 chordal?", bool(is_chordal(c4)), "cycle:", is_chordal(c4).induced_cycle)

# finite groups on every vertex: context-free exactly when the graph is chordal
finite = VertexAnnotation(is_fri=True, is_context_free=True)
for g in (c4, Graph(c4.vertices, c4.edges | {("a", "c")})):
    ag = AnnotatedProductGraph(g, {v: finite for v in g.vertices})
    print(len(g.edges), "edges:", classify_context_free(ag).as_dict())
