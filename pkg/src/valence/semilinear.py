"""Multisets, linear and semilinear sets of multisets.

Vectors are stored as tuples of counts over an ordered alphabet.  A
:class:`SemilinearSet` is a finite union of :class:`LinearSet` components
``base + N·p1 + ... + N·pn``.  Equality is only ever checked on bounded boxes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Multiset:
    alphabet: tuple
    counts: tuple

    def __post_init__(self):
        if len(self.alphabet) != len(self.counts):
            raise ValueError("counts do not match alphabet")
        if any(c < 0 for c in self.counts):
            raise ValueError("negative multiplicity")

    @classmethod
    def of(cls, alphabet: Sequence, counts: Mapping | None = None) -> "Multiset":
        alphabet = tuple(alphabet)
        counts = dict(counts or {})
        unknown = set(counts) - set(alphabet)
        if unknown:
            raise AlphabetMismatch(f"symbols {sorted(map(str, unknown))} not in alphabet")
        return cls(alphabet, tuple(counts.get(x, 0) for x in alphabet))

    @classmethod
    def zero(cls, alphabet: Sequence) -> "Multiset":
        alphabet = tuple(alphabet)
        return cls(alphabet, (0,) * len(alphabet))

    def __getitem__(self, symbol) -> int:
        return self.counts[self.alphabet.index(symbol)]

    def _check(self, other: "Multiset"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def __add__(self, other: "Multiset") -> "Multiset":
        self._check(other)
        return Multiset(self.alphabet, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def scale(self, n: int) -> "Multiset":
        return Multiset(self.alphabet, tuple(n * a for a in self.counts))

    def __le__(self, other: "Multiset") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict:
        return {x: c for x, c in zip(self.alphabet, self.counts) if c}

    def __repr__(self):
        inner = ", ".join(f"{x}:{c}" for x, c in self.as_dict().items())
        return "{" + inner + "}"


def parikh(word: Iterable, alphabet: Sequence | None = None) -> Multiset:
    """Letter counts of ``word``; the alphabet defaults to the sorted letters used."""
    word = list(word)
    if alphabet is None:
        alphabet = sorted(set(word))
    alphabet = tuple(alphabet)
    index = {x: i for i, x in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for x in word:
        try:
            counts[index[x]] += 1
        except KeyError:
            raise AlphabetMismatch(f"symbol {x!r} not in alphabet") from None
    return Multiset(alphabet, tuple(counts))


def leq_k(alpha: Multiset, beta: Multiset, k: int) -> bool:
    """``alpha <= beta`` componentwise and ``alpha ≡ beta`` mod ``k``."""
    if k < 1:
        raise ValueError("k must be positive")
    alpha._check(beta)
    return _leq_k(alpha.counts, beta.counts, k)


def _leq_k(a: tuple, b: tuple, k: int) -> bool:
    return all(x <= y and (y - x) % k == 0 for x, y in zip(a, b))


@dataclass(frozen=True)
class LinearSet:
    base: tuple
    periods: tuple = ()

    def __post_init__(self):
        # zero periods never change the set and break coefficient bounds
        periods = tuple(sorted({p for p in self.periods if any(p)}))
        object.__setattr__(self, "periods", periods)

    def contains(self, t: tuple) -> bool:
        rest = tuple(x - b for x, b in zip(t, self.base))
        if any(r < 0 for r in rest):
            return False
        return _solve(rest, self.periods, 0)

    def coefficients(self, t: tuple):
        """A coefficient tuple reaching ``t``, or None."""
        rest = tuple(x - b for x, b in zip(t, self.base))
        if any(r < 0 for r in rest):
            return None
        coeffs = [0] * len(self.periods)
        return tuple(coeffs) if _solve(rest, self.periods, 0, coeffs) else None


def _solve(rest: tuple, periods: tuple, i: int, coeffs: list | None = None) -> bool:
    if i == len(periods):
        return not any(rest)
    # coordinates still positive must be coverable by the remaining periods
    for x, r in enumerate(rest):
        if r and not any(p[x] for p in periods[i:]):
            return False
    p = periods[i]
    bound = min(r // c for r, c in zip(rest, p) if c)
    for m in range(bound, -1, -1):
        nxt = tuple(r - m * c for r, c in zip(rest, p))
        if _solve(nxt, periods, i + 1, coeffs):
            if coeffs is not None:
                coeffs[i] = m
            return True
    return False


@dataclass(frozen=True)
class SemilinearSet:
    alphabet: tuple
    components: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        n = len(self.alphabet)
        comps = []
        for c in self.components:
            if len(c.base) != n or any(len(p) != n for p in c.periods):
                raise AlphabetMismatch("component dimension does not match alphabet")
            comps.append(c)
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def empty(cls, alphabet: Sequence) -> "SemilinearSet":
        return cls(tuple(alphabet), ())

    @classmethod
    def linear(cls, base: Multiset, periods: Iterable[Multiset] = ()) -> "SemilinearSet":
        periods = list(periods)
        for p in periods:
            base._check(p)
        return cls(base.alphabet, (LinearSet(base.counts, tuple(p.counts for p in periods)),))

    def contains(self, t: Multiset) -> bool:
        if t.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{t.alphabet} vs {self.alphabet}")
        return self.contains_vector(t.counts)

    def contains_vector(self, t: tuple) -> bool:
        return any(c.contains(t) for c in self.components)

    def canonical(self) -> "SemilinearSet":
        """Deduplicated components in sorted order."""
        comps = sorted(set(self.components), key=lambda c: (c.base, c.periods))
        return SemilinearSet(self.alphabet, tuple(comps))

    def __len__(self):
        return len(self.components)


def contains(s: SemilinearSet, t: Multiset) -> bool:
    return s.contains(t)


def _check_same(s: SemilinearSet, t: SemilinearSet):
    if s.alphabet != t.alphabet:
        raise AlphabetMismatch(f"{s.alphabet} vs {t.alphabet}")


def union(s: SemilinearSet, t: SemilinearSet) -> SemilinearSet:
    _check_same(s, t)
    return SemilinearSet(s.alphabet, s.components + t.components)


def union_all(alphabet: Sequence, sets: Iterable[SemilinearSet]) -> SemilinearSet:
    comps = []
    alphabet = tuple(alphabet)
    for s in sets:
        if s.alphabet != alphabet:
            raise AlphabetMismatch(f"{s.alphabet} vs {alphabet}")
        comps.extend(s.components)
    return SemilinearSet(alphabet, tuple(comps))


def sum_sets(s: SemilinearSet, t: SemilinearSet) -> SemilinearSet:
    """Minkowski sum: pairwise base sums, period lists joined."""
    _check_same(s, t)
    comps = []
    for a in s.components:
        for b in t.components:
            base = tuple(x + y for x, y in zip(a.base, b.base))
            comps.append(LinearSet(base, a.periods + b.periods))
    return SemilinearSet(s.alphabet, tuple(comps))


def morph_image(s: SemilinearSet, h: Mapping, target: Sequence) -> SemilinearSet:
    """Image under the linear map sending symbol ``x`` to the multiset ``h[x]`` over ``target``.

    ``h[x]`` may be a :class:`Multiset` over ``target`` or a plain mapping.
    """
    target = tuple(target)
    rows = []
    for x in s.alphabet:
        img = h[x]
        if isinstance(img, Multiset):
            if img.alphabet != target:
                raise AlphabetMismatch("image multiset over the wrong alphabet")
            rows.append(img.counts)
        else:
            rows.append(Multiset.of(target, img).counts)

    def apply(v):
        out = [0] * len(target)
        for c, row in zip(v, rows):
            if c:
                for j, r in enumerate(row):
                    out[j] += c * r
        return tuple(out)

    comps = [LinearSet(apply(c.base), tuple(apply(p) for p in c.periods)) for c in s.components]
    return SemilinearSet(target, tuple(comps))


def upward_closure_k(minimals: Iterable[Multiset], k: int, alphabet: Sequence) -> SemilinearSet:
    """The set ``{t | m <=_k t for some minimal m}``: base m, periods ``k·e_x``."""
    if k < 1:
        raise ValueError("k must be positive")
    alphabet = tuple(alphabet)
    n = len(alphabet)
    periods = tuple(tuple(k if j == i else 0 for j in range(n)) for i in range(n))
    comps = []
    for m in minimals:
        if m.alphabet != alphabet:
            raise AlphabetMismatch(f"{m.alphabet} vs {alphabet}")
        comps.append(LinearSet(m.counts, periods))
    return SemilinearSet(alphabet, tuple(comps))


def box(alphabet: Sequence, bound: int):
    """All vectors in ``[0, bound]^alphabet``."""
    return product(range(bound + 1), repeat=len(tuple(alphabet)))


def equal_on_box(s: SemilinearSet, t: SemilinearSet, bound: int):
    """``(True, None)`` if membership agrees on the box, else ``(False, first differing vector)``."""
    _check_same(s, t)
    for v in box(s.alphabet, bound):
        if s.contains_vector(v) != t.contains_vector(v):
            return False, Multiset(s.alphabet, v)
    return True, None


def points_in_box(s: SemilinearSet, bound: int) -> set:
    return {v for v in box(s.alphabet, bound) if s.contains_vector(v)}
