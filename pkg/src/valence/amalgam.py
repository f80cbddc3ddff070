"""Identity words in free products, optionally amalgamated over a finite group.

A word over ``X0 ∪ X1`` is cut into maximal single-factor blocks.  A word
with at least two blocks can only evaluate to 1 if some block evaluates into
the identified subgroup F; that block is contracted to the symbol of the other
factor that names the same element of F, and the search recurses.  Each
contraction is the reverse of one production ``y → L_{1-i,f}`` of the
F-grammar whose start symbol is ``e0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .automata import tokenize
from .monoids import (
    DirectProduct,
    MonoidElement,
    MonoidError,
    PermGroup,
    equal,
    identity,
    multiply,
    product_of,
)

ONE = "1"


@dataclass(frozen=True)
class FiniteSubgroup:
    """F with its embeddings into both factors.

    ``embed[i][f]`` is the image of label ``f`` in factor ``i``; the label
    ``"1"`` must map to the identity.  ``symbols[i][f]`` optionally names an
    existing letter of ``X_i`` for ``f``; missing names are generated.
    """

    labels: tuple
    embed: tuple
    symbols: tuple = ({}, {})


@dataclass(frozen=True)
class AmalgamSpec:
    factors: tuple
    alphabets: tuple
    subgroup: FiniteSubgroup | None = None
    y_symbols: tuple = field(init=False)

    def __post_init__(self):
        if len(self.factors) != 2 or len(self.alphabets) != 2:
            raise ValueError("an amalgam has exactly two factors")
        X = [dict(a) for a in self.alphabets]
        for i in (0, 1):
            for x, g in X[i].items():
                if not isinstance(g, MonoidElement) or g.monoid != self.factors[i]:
                    raise MonoidError(f"letter {x!r} is not an element of factor {i}")
        if set(X[0]) & set(X[1]):
            raise ValueError(f"factor alphabets overlap: {sorted(set(X[0]) & set(X[1]))}")
        F = self.subgroup
        labels = (ONE,) if F is None else tuple(F.labels)
        if F is not None:
            _validate_subgroup(self.factors, F)
        ys: list = [{}, {}]
        for i in (0, 1):
            given = {} if F is None else dict(F.symbols[i])
            for f in labels:
                target = identity(self.factors[i]) if F is None else F.embed[i][f]
                name = given.get(f)
                if name is None:
                    name = f"e{i}" if f == ONE else f"{f}@{i}"
                    if name in X[0] or name in X[1]:
                        raise ValueError(f"generated symbol {name!r} collides with a letter")
                    X[i][name] = target
                elif name not in X[i] or not equal(X[i][name], target):
                    raise ValueError(f"symbol {name!r} does not name {f!r} in factor {i}")
                ys[i][f] = name
        object.__setattr__(self, "alphabets", (X[0], X[1]))
        object.__setattr__(self, "y_symbols", (ys[0], ys[1]))

    @property
    def labels(self) -> tuple:
        return (ONE,) if self.subgroup is None else tuple(self.subgroup.labels)

    def factor_of(self, x) -> int:
        if x in self.alphabets[0]:
            return 0
        if x in self.alphabets[1]:
            return 1
        raise ValueError(f"symbol {x!r} is in neither alphabet")

    def all_symbols(self) -> tuple:
        return tuple(self.alphabets[0]) + tuple(self.alphabets[1])

    def tokenize(self, text) -> tuple:
        return tokenize(self.all_symbols(), text)

    def embedded(self, i: int, f) -> MonoidElement:
        if self.subgroup is None:
            return identity(self.factors[i])
        return self.subgroup.embed[i][f]


def _finite_group(m) -> bool:
    if isinstance(m, PermGroup):
        return True
    return isinstance(m, DirectProduct) and all(_finite_group(f) for f in m.factors)


def _validate_subgroup(factors, F: FiniteSubgroup):
    if ONE not in F.labels:
        raise ValueError("the subgroup needs the identity label '1'")
    for i in (0, 1):
        if not _finite_group(factors[i]):
            raise MonoidError("amalgamation over a nontrivial subgroup needs finite-group factors")
        emb = F.embed[i]
        if set(emb) != set(F.labels):
            raise ValueError(f"embedding {i} does not cover the subgroup")
        if not emb[ONE].is_identity():
            raise ValueError(f"embedding {i} does not send 1 to 1")
        images = [emb[f].payload for f in F.labels]
        if len(set(images)) != len(images):
            raise ValueError(f"embedding {i} is not injective")

    def table(i):
        back = {F.embed[i][f].payload: f for f in F.labels}
        out = {}
        for f in F.labels:
            for g in F.labels:
                p = multiply(F.embed[i][f], F.embed[i][g]).payload
                if p not in back:
                    raise ValueError(f"image of the subgroup in factor {i} is not closed")
                out[f, g] = back[p]
        return out

    if table(0) != table(1):
        raise ValueError("the embeddings induce different multiplications on the subgroup")


class BlockKind(enum.Enum):
    IN_F = "in_F"
    NOT_IN_F = "not_in_F"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BlockValue:
    kind: BlockKind
    f: str | None = None


def factor_block_value(spec: AmalgamSpec, i: int, w) -> BlockValue:
    w = spec.tokenize(w) if isinstance(w, str) else tuple(w)
    X = spec.alphabets[i]
    for x in w:
        if x not in X:
            raise ValueError(f"symbol {x!r} is not in alphabet {i}")
    value = product_of(spec.factors[i], [X[x] for x in w])
    for f in spec.labels:
        if equal(value, spec.embedded(i, f)):
            return BlockValue(BlockKind.IN_F, f)
    return BlockValue(BlockKind.NOT_IN_F)


def blocks(spec: AmalgamSpec, w: Sequence) -> list:
    """Maximal single-factor blocks as ``(factor, start, end)``."""
    out = []
    for n, x in enumerate(w):
        i = spec.factor_of(x)
        if out and out[-1][0] == i:
            out[-1] = (i, out[-1][1], n + 1)
        else:
            out.append((i, n, n + 1))
    return out


@dataclass(frozen=True)
class Contraction:
    """``word[start:end]`` (over factor ``factor``) was replaced by ``symbol``."""

    word: tuple
    start: int
    end: int
    factor: int
    f: str
    symbol: str


@dataclass
class MembershipTrace:
    accepted: bool
    steps: list
    final: tuple


def identity_membership_trace(spec: AmalgamSpec, w) -> MembershipTrace:
    word = spec.tokenize(w)
    steps = []
    while True:
        bl = blocks(spec, word)
        if len(bl) <= 1:
            ok = True
            if bl:
                i = bl[0][0]
                ok = product_of(spec.factors[i], [spec.alphabets[i][x] for x in word]).is_identity()
            return MembershipTrace(ok, steps, word)
        for i, a, b in bl:
            val = factor_block_value(spec, i, word[a:b])
            if val.kind is BlockKind.UNKNOWN:
                raise MonoidError("block value is only known within a bound")
            if val.kind is BlockKind.IN_F:
                y = spec.y_symbols[1 - i][val.f]
                steps.append(Contraction(word, a, b, i, val.f, y))
                word = word[:a] + (y,) + word[b:]
                break
        else:
            # no block lands in F, so by the syllable property the value is not 1
            return MembershipTrace(False, steps, word)


def identity_membership(spec: AmalgamSpec, w) -> bool:
    return identity_membership_trace(spec, w).accepted


@dataclass(frozen=True)
class Production:
    """``lhs → L_{factor, f}``: any word over ``X_factor`` evaluating to ``f``."""

    lhs: str
    factor: int
    f: str


def grammar_productions(spec: AmalgamSpec) -> list:
    out = []
    for i in (0, 1):
        for f in spec.labels:
            out.append(Production(spec.y_symbols[i][f], 1 - i, f))
    return out


def start_symbol(spec: AmalgamSpec) -> str:
    return spec.y_symbols[0][ONE]


def replay_derivation(spec: AmalgamSpec, trace: MembershipTrace, w) -> bool:
    """Re-derive ``w`` from the start symbol using the production table.

    The trace is read backwards: each contraction becomes the expansion of
    one nonterminal occurrence into a word of the matching language.
    """
    if not trace.accepted:
        return False
    table = {(p.lhs, p.factor, p.f) for p in grammar_productions(spec)}

    def derives(lhs, factor, f, u) -> bool:
        return (lhs, factor, f) in table and all(spec.factor_of(x) == factor for x in u) and (
            factor_block_value(spec, factor, u) == BlockValue(BlockKind.IN_F, f)
        )

    final = trace.final
    e0, e1 = spec.y_symbols[0][ONE], spec.y_symbols[1][ONE]
    # S = e0 → L_{1,1}; a final block over X0 needs the detour e0 → e1 → L_{0,1}
    if not final or spec.factor_of(final[0]) == 1:
        if not derives(e0, 1, ONE, final):
            return False
    else:
        if not (derives(e0, 1, ONE, (e1,)) and derives(e1, 0, ONE, final)):
            return False
    form = final
    for step in reversed(trace.steps):
        if form[step.start] != step.symbol:
            return False
        u = step.word[step.start : step.end]
        if not derives(step.symbol, step.factor, step.f, u):
            return False
        form = form[: step.start] + u + form[step.start + 1 :]
        if form != step.word:
            return False
    return form == spec.tokenize(w)
