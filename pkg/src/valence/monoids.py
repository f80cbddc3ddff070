"""Storage monoids with a decidable word problem.

Each monoid *kind* is a small immutable descriptor object that knows how to
multiply payloads, recognise the neutral element and list a standard
generating set.  :class:`MonoidElement` pairs a descriptor with a payload in
normal form; the module level functions (:func:`multiply`, :func:`identity`,
...) are the public surface.

Payloads:

* ``Bicyclic``      -- ``(a, b)`` meaning ``x̄^a x^b``
* ``Integers``      -- an ``int``
* ``PermGroup``     -- a tuple of images of ``0..degree-1``
* ``Grigorchuk``    -- a reduced word over ``abcd``
* ``GraphProduct``  -- a reduced tuple of ``(vertex, sign)`` letters
* ``DirectProduct`` -- a tuple of component payloads
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Iterable, Sequence

DEFAULT_ORDER_CAP = 2**16


class MonoidError(ValueError):
    """Raised for descriptor mismatches and unsupported operations."""


class TooLarge(ArithmeticError):
    """An element order exceeded the caller's cap."""

    def __init__(self, cap: int):
        super().__init__(f"element order exceeds cap {cap}")
        self.cap = cap


class Bounded(enum.Enum):
    """Outcome of a bounded semi-decision."""

    YES = "yes"
    NO_WITHIN_BOUND = "no_within_bound"


# ---------------------------------------------------------------------------
# atomic monoids


@dataclass(frozen=True)
class Bicyclic:
    """The bicyclic monoid ``<x, x̄ | x x̄ = 1>``."""

    kind = "bicyclic"
    is_group = False
    canonical = True

    def identity_payload(self):
        return (0, 0)

    def mul(self, p, q):
        a, b = p
        c, d = q
        m = min(b, c)
        return (a + c - m, b + d - m)

    def is_identity(self, p) -> bool:
        return p == (0, 0)

    def generators(self) -> dict[str, Any]:
        return {"x": (0, 1), "x̄": (1, 0)}

    def validate(self, p):
        if not (isinstance(p, tuple) and len(p) == 2 and all(isinstance(n, int) and n >= 0 for n in p)):
            raise MonoidError(f"bad bicyclic payload {p!r}")

    def size(self, p) -> int:
        return p[0] + p[1]


@dataclass(frozen=True)
class Integers:
    """The additive group of integers."""

    kind = "integers"
    is_group = True
    canonical = True

    def identity_payload(self):
        return 0

    def mul(self, p, q):
        return p + q

    def inverse(self, p):
        return -p

    def is_identity(self, p) -> bool:
        return p == 0

    def generators(self) -> dict[str, Any]:
        return {"+1": 1, "-1": -1}

    def validate(self, p):
        if not isinstance(p, int) or isinstance(p, bool):
            raise MonoidError(f"bad integer payload {p!r}")

    def size(self, p) -> int:
        return abs(p)


@dataclass(frozen=True)
class PermGroup:
    """The symmetric group on ``0..degree-1``.

    ``mul(p, q)`` applies ``p`` first, then ``q``.
    """

    degree: int
    kind = "perm"
    is_group = True
    canonical = True

    def __post_init__(self):
        if self.degree < 1:
            raise MonoidError("degree must be positive")

    def identity_payload(self):
        return tuple(range(self.degree))

    def mul(self, p, q):
        return tuple(q[i] for i in p)

    def inverse(self, p):
        inv = [0] * self.degree
        for i, j in enumerate(p):
            inv[j] = i
        return tuple(inv)

    def is_identity(self, p) -> bool:
        return all(i == j for i, j in enumerate(p))

    def generators(self) -> dict[str, Any]:
        n = self.degree
        gens = {}
        if n >= 2:
            t = list(range(n))
            t[0], t[1] = 1, 0
            gens["(0 1)"] = tuple(t)
        if n >= 3:
            gens["(0 1 … n-1)"] = tuple(list(range(1, n)) + [0])
        return gens

    def validate(self, p):
        if not isinstance(p, tuple) or sorted(p) != list(range(self.degree)):
            raise MonoidError(f"bad permutation {p!r} for degree {self.degree}")

    def size(self, p) -> int:
        return 0


# Grigorchuk's group: a swaps the two subtrees, b = (a, c), c = (a, d), d = (1, b).
_SECTIONS = {"b": ("a", "c"), "c": ("a", "d"), "d": ("", "b")}
_BCD = frozenset("bcd")


def grigorchuk_reduce(word: str) -> str:
    """Free reduction using a^2 = b^2 = c^2 = d^2 = 1 and bc = d etc."""
    out: list[str] = []
    for ch in word:
        if ch not in "abcd":
            raise MonoidError(f"bad Grigorchuk letter {ch!r}")
        if out and out[-1] == ch:
            out.pop()
        elif out and ch in _BCD and out[-1] in _BCD:
            (third,) = _BCD - {ch, out[-1]}
            out[-1] = third
        else:
            out.append(ch)
    return "".join(out)


@lru_cache(maxsize=None)
def _grigorchuk_trivial(word: str) -> bool:
    # word is reduced
    if not word:
        return True
    if word.count("a") % 2:
        return False
    left: list[str] = []
    right: list[str] = []
    swapped = False
    for ch in word:
        if ch == "a":
            swapped = not swapped
            continue
        s0, s1 = _SECTIONS[ch]
        if swapped:
            s0, s1 = s1, s0
        left.append(s0)
        right.append(s1)
    return _grigorchuk_trivial(grigorchuk_reduce("".join(left))) and _grigorchuk_trivial(
        grigorchuk_reduce("".join(right))
    )


def _grigorchuk_act(word: str, bits: tuple[int, ...]) -> tuple[int, ...]:
    out = list(bits)
    for ch in word:
        g, i = ch, 0
        while g and i < len(out):
            if g == "a":
                out[i] ^= 1
                break
            g = _SECTIONS[g][out[i]]
            i += 1
    return tuple(out)


@dataclass(frozen=True)
class Grigorchuk:
    """Grigorchuk's infinite 2-group acting on the binary tree."""

    kind = "grigorchuk"
    is_group = True
    canonical = False
    key_depth = 5

    def identity_payload(self):
        return ""

    def mul(self, p, q):
        return grigorchuk_reduce(p + q)

    def inverse(self, p):
        return p[::-1]

    def is_identity(self, p) -> bool:
        return _grigorchuk_trivial(p)

    def generators(self) -> dict[str, Any]:
        return {c: c for c in "abcd"}

    def validate(self, p):
        if not isinstance(p, str) or grigorchuk_reduce(p) != p:
            raise MonoidError(f"Grigorchuk payload {p!r} is not reduced")

    def size(self, p) -> int:
        return len(p)

    def hash_key(self, p):
        """Action on the leaves at depth ``key_depth``; equal elements agree."""
        return tuple(_grigorchuk_act(p, bits) for bits in product((0, 1), repeat=self.key_depth))


# ---------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class GraphProduct:
    """Graph product of copies of ``Bicyclic`` and ``Integers``.

    ``edges`` holds sorted vertex pairs ``(u, v)`` with ``u < v``; vertex ``v``
    carries ``factors[v]``.  Letters are ``(v, +1)`` for ``a_v`` and
    ``(v, -1)`` for ``ā_v``.
    """

    factors: tuple
    edges: frozenset = frozenset()
    kind = "graph_product"
    canonical = True

    def __post_init__(self):
        n = len(self.factors)
        for f in self.factors:
            if not isinstance(f, (Bicyclic, Integers)):
                raise MonoidError("graph product factors must be Bicyclic or Integers")
        for u, v in self.edges:
            if not (0 <= u < v < n):
                raise MonoidError(f"bad graph product edge {(u, v)}")
        adj = [set() for _ in range(n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @property
    def is_group(self) -> bool:
        return all(f.is_group for f in self.factors)

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def identity_payload(self):
        return ()

    def reduce_step(self, out: list, letter) -> None:
        """Append ``letter`` to the reduced word ``out`` in place."""
        v, s = letter
        adj = self._adj[v]
        group = self.factors[v].is_group
        for i in range(len(out) - 1, -1, -1):
            u, t = out[i]
            if u == v:
                if t == -s and (group or s == -1):
                    del out[i]
                    return
                break
            if u not in adj:
                break
        out.append(letter)

    def mul(self, p, q):
        out = list(p)
        for letter in q:
            self.reduce_step(out, letter)
        return tuple(out)

    def inverse(self, p):
        if not self.is_group:
            raise MonoidError("graph product with bicyclic factors is not a group")
        return tuple((v, -s) for v, s in reversed(p))

    def is_identity(self, p) -> bool:
        return len(p) == 0

    def generators(self) -> dict[str, Any]:
        gens = {}
        for v in range(len(self.factors)):
            gens[f"a{v}"] = ((v, 1),)
            gens[f"ā{v}"] = ((v, -1),)
        return gens

    def validate(self, p):
        if not isinstance(p, tuple):
            raise MonoidError("graph product payload must be a tuple")
        for letter in p:
            if not (isinstance(letter, tuple) and len(letter) == 2):
                raise MonoidError(f"bad letter {letter!r}")
            v, s = letter
            if not (isinstance(v, int) and 0 <= v < len(self.factors)):
                raise MonoidError(f"invalid vertex index {v!r}")
            if s not in (1, -1):
                raise MonoidError(f"bad sign {s!r}")
        if self.mul((), p) != p:
            raise MonoidError("graph product payload is not reduced")

    def size(self, p) -> int:
        return len(p)


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple
    kind = "direct_product"

    @property
    def is_group(self) -> bool:
        return all(f.is_group for f in self.factors)

    @property
    def canonical(self) -> bool:
        return all(f.canonical for f in self.factors)

    def identity_payload(self):
        return tuple(f.identity_payload() for f in self.factors)

    def mul(self, p, q):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, p, q))

    def inverse(self, p):
        if not self.is_group:
            raise MonoidError("direct product has a non-group factor")
        return tuple(f.inverse(a) for f, a in zip(self.factors, p))

    def is_identity(self, p) -> bool:
        return all(f.is_identity(a) for f, a in zip(self.factors, p))

    def generators(self) -> dict[str, Any]:
        gens = {}
        ident = self.identity_payload()
        for i, f in enumerate(self.factors):
            for name, g in f.generators().items():
                payload = list(ident)
                payload[i] = g
                gens[f"{name}@{i}"] = tuple(payload)
        return gens

    def validate(self, p):
        if not isinstance(p, tuple) or len(p) != len(self.factors):
            raise MonoidError("direct product payload has wrong arity")
        for f, a in zip(self.factors, p):
            f.validate(a)

    def size(self, p) -> int:
        return sum(f.size(a) for f, a in zip(self.factors, p))

    def hash_key(self, p):
        return tuple(f.hash_key(a) if hasattr(f, "hash_key") else a for f, a in zip(self.factors, p))


def free_product(*factors) -> GraphProduct:
    return GraphProduct(tuple(factors), frozenset())


def trivial_group() -> PermGroup:
    return PermGroup(1)


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class MonoidElement:
    monoid: Any
    payload: Any

    def __mul__(self, other: "MonoidElement") -> "MonoidElement":
        return multiply(self, other)

    def __pow__(self, n: int) -> "MonoidElement":
        return power(self, n)

    def is_identity(self) -> bool:
        return self.monoid.is_identity(self.payload)

    def __repr__(self):
        return f"<{self.monoid.kind} {self.payload!r}>"


def element(monoid, payload, *, check: bool = True) -> MonoidElement:
    """Wrap ``payload``; Grigorchuk words and graph-product words are reduced first."""
    if monoid.kind == "grigorchuk" and isinstance(payload, str):
        payload = grigorchuk_reduce(payload)
    elif monoid.kind == "graph_product":
        payload = monoid.mul((), tuple(tuple(x) for x in payload))
    if check:
        monoid.validate(payload)
    return MonoidElement(monoid, payload)


def generator(monoid, name: str) -> MonoidElement:
    return MonoidElement(monoid, monoid.generators()[name])


def identity(monoid) -> MonoidElement:
    return MonoidElement(monoid, monoid.identity_payload())


def multiply(x: MonoidElement, y: MonoidElement) -> MonoidElement:
    if x.monoid != y.monoid:
        raise MonoidError(f"descriptor mismatch: {x.monoid} vs {y.monoid}")
    return MonoidElement(x.monoid, x.monoid.mul(x.payload, y.payload))


def product_of(monoid, elements: Iterable[MonoidElement]) -> MonoidElement:
    acc = monoid.identity_payload()
    for e in elements:
        if e.monoid != monoid:
            raise MonoidError(f"descriptor mismatch: {monoid} vs {e.monoid}")
        acc = monoid.mul(acc, e.payload)
    return MonoidElement(monoid, acc)


def power(x: MonoidElement, n: int) -> MonoidElement:
    if n < 0:
        return power(inverse(x), -n)
    return product_of(x.monoid, [x] * n)


def is_identity(x: MonoidElement) -> bool:
    return x.monoid.is_identity(x.payload)


def inverse(x: MonoidElement) -> MonoidElement:
    if not x.monoid.is_group:
        raise MonoidError(f"{x.monoid.kind} is not a group")
    return MonoidElement(x.monoid, x.monoid.inverse(x.payload))


def equal(x: MonoidElement, y: MonoidElement) -> bool:
    """Element equality; non-canonical payloads compare through ``x·y⁻¹``."""
    if x.monoid != y.monoid:
        raise MonoidError("descriptor mismatch")
    if x.monoid.canonical:
        return x.payload == y.payload
    return is_identity(multiply(x, inverse(y)))


def reduce(monoid: GraphProduct, word: Sequence) -> tuple:
    """Normal form of a generator word in a graph product.

    A letter ``a_v`` at position i cancels against ``ā_v`` at j > i when every
    letter strictly between them sits on a vertex adjacent to ``v``; for
    ``Integers`` factors the order ``ā_v … a_v`` cancels as well.  Pairs are
    removed leftmost-j first, pairing with the largest admissible i.
    """
    if not isinstance(monoid, GraphProduct):
        raise MonoidError("reduce needs a graph product")
    out: list = []
    n = len(monoid.factors)
    for letter in word:
        v, s = letter
        if not (isinstance(v, int) and 0 <= v < n):
            raise MonoidError(f"invalid vertex index {v!r}")
        if s not in (1, -1):
            raise MonoidError(f"bad sign {s!r}")
        monoid.reduce_step(out, (v, s))
    return tuple(out)


# ---------------------------------------------------------------------------
# invertibility, J-class, orders


def _check_invertibility_support(monoid):
    if isinstance(monoid, GraphProduct):
        raise MonoidError("invertibility inside graph products is not supported")
    if isinstance(monoid, DirectProduct):
        for f in monoid.factors:
            _check_invertibility_support(f)


def is_right_invertible(x: MonoidElement) -> bool:
    """Whether some ``y`` has ``x·y = 1``."""
    m = x.monoid
    _check_invertibility_support(m)
    if isinstance(m, Bicyclic):
        return x.payload[0] == 0
    if isinstance(m, DirectProduct):
        return all(is_right_invertible(MonoidElement(f, a)) for f, a in zip(m.factors, x.payload))
    return True


def is_left_invertible(x: MonoidElement) -> bool:
    """Whether some ``y`` has ``y·x = 1``."""
    m = x.monoid
    _check_invertibility_support(m)
    if isinstance(m, Bicyclic):
        return x.payload[1] == 0
    if isinstance(m, DirectProduct):
        return all(is_left_invertible(MonoidElement(f, a)) for f, a in zip(m.factors, x.payload))
    return True


def _search_generators(monoid):
    if isinstance(monoid, PermGroup):
        # the inverse of the n-cycle is needed for a symmetric search
        gens = dict(monoid.generators())
        if "(0 1 … n-1)" in gens:
            gens["(0 1 … n-1)⁻¹"] = monoid.inverse(gens["(0 1 … n-1)"])
        return gens
    return monoid.generators()


def _ball(monoid, gens, bound: int, left: bool) -> dict:
    """Payloads reachable by generator words of length <= bound, with a witness word."""
    ident = monoid.identity_payload()
    seen = {ident: ()}
    frontier = [ident]
    for _ in range(bound):
        nxt = []
        for p in frontier:
            for name, g in gens.items():
                q = monoid.mul(g, p) if left else monoid.mul(p, g)
                if q not in seen:
                    seen[q] = ((name,) + seen[p]) if left else (seen[p] + (name,))
                    nxt.append(q)
        frontier = nxt
    return seen


def in_J_bounded(x: MonoidElement, bound: int):
    """Search generator words ``b, c`` of length <= bound with ``b·x·c = 1``.

    Returns ``(Bounded.YES, (b, c))`` with the witness words, or
    ``(Bounded.NO_WITHIN_BOUND, None)``.
    """
    m = x.monoid
    gens = _search_generators(m)
    lefts = _ball(m, gens, bound, left=True)
    rights = _ball(m, gens, bound, left=False)
    for b, bw in sorted(lefts.items(), key=lambda kv: len(kv[1])):
        bx = m.mul(b, x.payload)
        for c, cw in rights.items():
            if m.is_identity(m.mul(bx, c)):
                return Bounded.YES, (bw, cw)
    return Bounded.NO_WITHIN_BOUND, None


def element_order(x: MonoidElement, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least ``k >= 1`` with ``x^k = 1``; raises :class:`TooLarge` past ``cap``."""
    m = x.monoid
    if not m.is_group:
        raise MonoidError(f"{m.kind} is not a group")
    acc = x.payload
    for k in range(1, cap + 1):
        if m.is_identity(acc):
            return k
        acc = m.mul(acc, x.payload)
    raise TooLarge(cap)


def lcm_orders(elements: Iterable[MonoidElement], cap: int = DEFAULT_ORDER_CAP) -> int:
    k = 1
    for e in elements:
        k = math.lcm(k, element_order(e, cap))
    return k
