"""Valence automata over monoids: execution, storage-graph classification and
semilinear Parikh images over torsion groups."""

from .automata import Edge, Membership, ValenceAutomaton, Verdict, accepts_bounded, enumerate_language, replay
from .graphs import (
    AnnotatedProductGraph,
    Graph,
    StorageGraph,
    VertexAnnotation,
    classify_context_free,
    classify_regular,
    classify_semilinear,
    is_chordal,
    storage_monoid,
)
from .monoids import (
    Bicyclic,
    DirectProduct,
    GraphProduct,
    Grigorchuk,
    Integers,
    MonoidElement,
    PermGroup,
    element,
    element_order,
    generator,
    identity,
    is_identity,
)
from .semilinear import LinearSet, Multiset, SemilinearSet, parikh

__version__ = "0.1.0"
