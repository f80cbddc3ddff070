"""Valence automata: finite automata whose edges also carry monoid elements.

A run accepts when it consumes the input, ends in a final state and the
product of the edge elements is the identity.  Membership is explored by
breadth-first search over configurations ``(state, storage, consumed)`` and
is only ever reported as accepted or rejected *within a bound*.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

from .monoids import MonoidElement, MonoidError, identity
from .semilinear import parikh

DEFAULT_STORAGE_CAP = 64


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED_WITHIN_BOUND = "rejected_within_bound"


@dataclass(frozen=True)
class Edge:
    source: Hashable
    word: tuple
    element: MonoidElement
    target: Hashable


@dataclass(frozen=True)
class ValenceAutomaton:
    states: tuple
    alphabet: tuple
    monoid: Any
    edges: tuple
    initial: Hashable
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        edges = []
        for e in self.edges:
            if not isinstance(e, Edge):
                p, w, m, q = e
                e = Edge(p, tuple(w), m, q)
            edges.append(e)
        object.__setattr__(self, "edges", tuple(edges))
        states = set(self.states)
        if len(states) != len(self.states):
            raise ValueError("duplicate state ids")
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial!r} not in states")
        if not self.finals <= states:
            raise ValueError("final states must be states")
        symbols = set(self.alphabet)
        for e in self.edges:
            if e.source not in states or e.target not in states:
                raise ValueError(f"edge {e} references an unknown state")
            if e.element.monoid != self.monoid:
                raise MonoidError(f"edge element over {e.element.monoid}, automaton over {self.monoid}")
            if not set(e.word) <= symbols:
                raise ValueError(f"edge word {e.word} leaves the input alphabet")

    def tokenize(self, text) -> tuple:
        return tokenize(self.alphabet, text)

    def out_edges(self) -> dict:
        out = {q: [] for q in self.states}
        for i, e in enumerate(self.edges):
            out[e.source].append(i)
        return out


def tokenize(alphabet: Sequence, text) -> tuple:
    """Split ``text`` into alphabet symbols by greedy longest match.

    Non-string sequences are taken to be symbol sequences already.
    """
    if not isinstance(text, str):
        return tuple(text)
    symbols = sorted(alphabet, key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        for s in symbols:
            if s and text.startswith(s, i):
                out.append(s)
                i += len(s)
                break
        else:
            raise ValueError(f"cannot tokenize {text[i:]!r} over alphabet {list(alphabet)}")
    return tuple(out)


@dataclass
class Membership:
    verdict: Verdict
    run: tuple | None = None
    truncated: bool = False

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPTED

    def __bool__(self):
        return self.accepted


def accepts_bounded(A: ValenceAutomaton, word, max_steps: int, storage_cap: int = DEFAULT_STORAGE_CAP) -> Membership:
    """Search runs of at most ``max_steps`` edges that consume exactly ``word``.

    The returned run lists edge indices; ``truncated`` records that some branch
    was abandoned because its storage outgrew ``storage_cap``.
    """
    w = A.tokenize(word)
    m = A.monoid
    out = A.out_edges()
    start = (A.initial, m.identity_payload(), 0)
    parent = {start: None}
    frontier = [start]
    truncated = False

    def done(cfg):
        q, p, pos = cfg
        return pos == len(w) and q in A.finals and m.is_identity(p)

    def trace(cfg):
        run = []
        while parent[cfg] is not None:
            cfg, i = parent[cfg]
            run.append(i)
        return tuple(reversed(run))

    if done(start):
        return Membership(Verdict.ACCEPTED, (), False)
    for _ in range(max_steps):
        nxt = []
        for cfg in frontier:
            q, p, pos = cfg
            for i in out[q]:
                e = A.edges[i]
                n = len(e.word)
                if e.word != w[pos : pos + n]:
                    continue
                payload = m.mul(p, e.element.payload)
                if m.size(payload) > storage_cap:
                    truncated = True
                    continue
                c2 = (e.target, payload, pos + n)
                if c2 in parent:
                    continue
                parent[c2] = (cfg, i)
                if done(c2):
                    return Membership(Verdict.ACCEPTED, trace(c2), truncated)
                nxt.append(c2)
        frontier = nxt
        if not frontier:
            break
    return Membership(Verdict.REJECTED_WITHIN_BOUND, None, truncated)


def replay(A: ValenceAutomaton, run: Sequence[int], word) -> bool:
    """Check that ``run`` is an accepting run of ``A`` on ``word``."""
    w = A.tokenize(word)
    q = A.initial
    acc = identity(A.monoid)
    consumed: list = []
    for i in run:
        e = A.edges[i]
        if e.source != q:
            return False
        consumed.extend(e.word)
        acc = acc * e.element
        q = e.target
    return tuple(consumed) == w and q in A.finals and acc.is_identity()


def enumerate_language(
    A: ValenceAutomaton, max_len: int, max_steps: int, storage_cap: int = DEFAULT_STORAGE_CAP
) -> set:
    """All words of length <= ``max_len`` accepted within ``max_steps`` edges."""
    m = A.monoid
    out = A.out_edges()
    start = (A.initial, m.identity_payload(), ())
    seen = {start}
    frontier = [start]
    found = set()
    if A.initial in A.finals:
        found.add(())
    for _ in range(max_steps):
        nxt = []
        for q, p, prefix in frontier:
            for i in out[q]:
                e = A.edges[i]
                if len(prefix) + len(e.word) > max_len:
                    continue
                payload = m.mul(p, e.element.payload)
                if m.size(payload) > storage_cap:
                    continue
                cfg = (e.target, payload, prefix + e.word)
                if cfg in seen:
                    continue
                seen.add(cfg)
                if e.target in A.finals and m.is_identity(payload):
                    found.add(cfg[2])
                nxt.append(cfg)
        frontier = nxt
        if not frontier:
            break
    return found


# ---------------------------------------------------------------------------
# plain finite automata and the regular intersection


@dataclass(frozen=True)
class FiniteAutomaton:
    """A nondeterministic finite automaton with single-letter transitions."""

    states: tuple
    alphabet: tuple
    transitions: frozenset
    initial: Hashable
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))

    @classmethod
    def universal(cls, alphabet) -> "FiniteAutomaton":
        return cls(("u",), alphabet, {("u", x, "u") for x in alphabet}, "u", {"u"})

    @classmethod
    def empty(cls, alphabet) -> "FiniteAutomaton":
        return cls(("z",), alphabet, {("z", x, "z") for x in alphabet}, "z", set())

    def accepts(self, word) -> bool:
        w = tokenize(self.alphabet, word)
        current = {self.initial}
        for x in w:
            current = {q for (p, y, q) in self.transitions if p in current and y == x}
        return bool(current & self.finals)


def normalize(A: ValenceAutomaton) -> ValenceAutomaton:
    """Split multi-letter edge words into chains of single-letter edges.

    The element rides on the first edge of each chain; fresh states are named
    ``"{source}~{edge}.{i}"``.
    """
    states = list(A.states)
    edges = []
    one = identity(A.monoid)
    for idx, e in enumerate(A.edges):
        if len(e.word) <= 1:
            edges.append(e)
            continue
        chain = [e.source] + [f"{e.source}~{idx}.{i}" for i in range(1, len(e.word))] + [e.target]
        states.extend(chain[1:-1])
        for i, x in enumerate(e.word):
            edges.append(Edge(chain[i], (x,), e.element if i == 0 else one, chain[i + 1]))
    return ValenceAutomaton(tuple(states), A.alphabet, A.monoid, tuple(edges), A.initial, A.finals)


def intersect_regular(A: ValenceAutomaton, N: FiniteAutomaton) -> ValenceAutomaton:
    """Product automaton for ``L(A) ∩ L(N)``; elements ride on the A-component."""
    if set(A.alphabet) != set(N.alphabet):
        raise ValueError("input alphabets differ")
    B = normalize(A)
    delta: dict = {}
    for p, x, q in N.transitions:
        delta.setdefault((p, x), []).append(q)
    states = [(p, n) for p in B.states for n in N.states]
    edges = []
    for e in B.edges:
        for n in N.states:
            if not e.word:
                edges.append(Edge((e.source, n), (), e.element, (e.target, n)))
            else:
                for n2 in delta.get((n, e.word[0]), ()):
                    edges.append(Edge((e.source, n), e.word, e.element, (e.target, n2)))
    finals = {(p, n) for p in B.finals for n in N.finals}
    return ValenceAutomaton(tuple(states), A.alphabet, A.monoid, tuple(edges), (A.initial, N.initial), finals)


# ---------------------------------------------------------------------------
# the edge-alphabet automaton


def edge_symbol(i: int) -> str:
    return f"e{i}"


def hat_automaton(A: ValenceAutomaton) -> ValenceAutomaton:
    """The automaton reading its own edge names: edge ``i`` reads ``e{i}``."""
    alphabet = tuple(edge_symbol(i) for i in range(len(A.edges)))
    edges = tuple(Edge(e.source, (edge_symbol(i),), e.element, e.target) for i, e in enumerate(A.edges))
    return ValenceAutomaton(A.states, alphabet, A.monoid, edges, A.initial, A.finals)


def edge_parikh_map(A: ValenceAutomaton) -> dict:
    """``e{i}`` ↦ Parikh vector of edge ``i``'s input word."""
    return {edge_symbol(i): parikh(e.word, A.alphabet) for i, e in enumerate(A.edges)}


def substitute_edges(A: ValenceAutomaton, edge_word: Iterable[str]) -> tuple:
    """Input word spelled by a word over the edge alphabet."""
    out: list = []
    for s in edge_word:
        out.extend(A.edges[int(s[1:])].word)
    return tuple(out)


def to_dot(A: ValenceAutomaton) -> str:
    def label(e: Edge) -> str:
        w = " ".join(map(str, e.word)) or "λ"
        return f"{w} / {e.element.payload!r}".replace('"', r"\"")

    lines = ["digraph valence {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in A.states:
        shape = "doublecircle" if q in A.finals else "circle"
        lines.append(f'  "{q}" [shape={shape}];')
    lines.append(f'  __start -> "{A.initial}";')
    for e in A.edges:
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{label(e)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
