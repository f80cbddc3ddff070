"""Semilinear Parikh images for valence automata over torsion groups.

The extraction works on the edge-alphabet automaton Â.  For every set of
states S it collects the simple loops that stay inside S (one symbol per
distinct loop Parikh vector), the short accepting computations visiting exactly
S (skeletons), and a modulus k killing every loop value.  For each skeleton v
the set U_v of loop multiplicities that can be inserted into v while keeping
the storage trivial is k-upward-closed; its minimal elements are searched in
size order up to a radius.  The edge-level image is the union of
``Ψ(v) + φ̃(U_v)`` and is finally projected onto the input alphabet.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce as _fold
from itertools import combinations, product
from math import lcm
from typing import Sequence

from .automata import ValenceAutomaton, edge_parikh_map, edge_symbol, hat_automaton
from .monoids import (
    DEFAULT_ORDER_CAP,
    DirectProduct,
    Grigorchuk,
    MonoidError,
    PermGroup,
    element,
    element_order,
)
from .semilinear import (
    LinearSet,
    Multiset,
    SemilinearSet,
    morph_image,
    upward_closure_k,
)

GROUP_ENUM_CAP = 5000


def sigma(A: ValenceAutomaton, w: Sequence[int]) -> frozenset:
    """States touched by the edge word ``w``; the empty word touches none."""
    out = set()
    for i in w:
        out.add(A.edges[i].source)
        out.add(A.edges[i].target)
    return frozenset(out)


def is_computation(A: ValenceAutomaton, w: Sequence[int], p=None, q=None) -> bool:
    for a, b in zip(w, w[1:]):
        if A.edges[a].target != A.edges[b].source:
            return False
    if w and p is not None and A.edges[w[0]].source != p:
        return False
    if w and q is not None and A.edges[w[-1]].target != q:
        return False
    return True


def is_simple_loop(A: ValenceAutomaton, w: Sequence[int]) -> bool:
    if not w or not is_computation(A, w):
        return False
    targets = [A.edges[i].target for i in w]
    return targets[-1] == A.edges[w[0]].source and len(set(targets)) == len(targets)


# ---------------------------------------------------------------------------
# loops and skeletons


@dataclass(frozen=True)
class LoopAlphabet:
    """Simple loops inside S, grouped into symbols by their edge Parikh vector.

    ``loops[i]`` is an edge word and ``loop_symbol[i]`` its symbol index;
    ``phi[j]`` is a representative loop for symbol ``symbols[j]``.
    """

    S: frozenset
    loops: tuple
    loop_symbol: tuple
    symbols: tuple
    phi: tuple
    edge_alphabet: tuple

    def parikh(self, j: int) -> Multiset:
        return _edge_parikh(self.phi[j], self.edge_alphabet)

    def phi_tilde(self) -> dict:
        return {y: self.parikh(j) for j, y in enumerate(self.symbols)}

    def loops_at(self, A: ValenceAutomaton, q) -> list:
        return [(self.loop_symbol[i], w) for i, w in enumerate(self.loops) if A.edges[w[0]].source == q]


def _edge_parikh(w: Sequence[int], edge_alphabet: tuple) -> Multiset:
    counts = [0] * len(edge_alphabet)
    for i in w:
        counts[i] += 1
    return Multiset(edge_alphabet, tuple(counts))


def simple_loops(A: ValenceAutomaton, S) -> LoopAlphabet:
    """All simple q-loops for q in S with every touched state in S."""
    S = frozenset(S)
    out = A.out_edges()
    loops = []
    for q in sorted(S, key=A.states.index):
        stack = [(q, (), frozenset())]
        while stack:
            here, w, seen = stack.pop()
            for i in reversed(out[here]):
                t = A.edges[i].target
                if t not in S or t in seen:
                    continue
                if t == q:
                    loops.append(w + (i,))
                else:
                    stack.append((t, w + (i,), seen | {t}))
    loops.sort(key=lambda w: (len(w), w))
    edge_alphabet = tuple(edge_symbol(i) for i in range(len(A.edges)))
    by_vector: dict = {}
    loop_symbol = []
    phi = []
    for w in loops:
        vec = _edge_parikh(w, edge_alphabet).counts
        if vec not in by_vector:
            by_vector[vec] = len(phi)
            phi.append(w)
        loop_symbol.append(by_vector[vec])
    symbols = tuple(f"y{j}" for j in range(len(phi)))
    return LoopAlphabet(S, tuple(loops), tuple(loop_symbol), symbols, tuple(phi), edge_alphabet)


def paper_bound(A: ValenceAutomaton) -> int:
    n = len(A.states)
    return n * (2**n + 1)


@dataclass(frozen=True)
class SkeletonSet:
    S: frozenset
    members: tuple
    bound: int
    truncated: bool = False


def skeletons(A: ValenceAutomaton, S, length_bound: int | None = None, limit: int = 100_000) -> SkeletonSet:
    """Every accepting-shaped computation with touched states exactly S.

    This is the full set up to ``length_bound``; ``limit`` caps the number of
    members and marks the result truncated when hit.
    """
    S = frozenset(S)
    bound = paper_bound(A) if length_bound is None else length_bound
    members = []
    if not S:
        if A.initial in A.finals:
            members.append(())
        return SkeletonSet(S, tuple(members), bound)
    out = A.out_edges()
    truncated = False
    queue = [(A.initial, ())]
    while queue:
        nxt = []
        for here, w in queue:
            for i in out[here]:
                e = A.edges[i]
                if e.target not in S or e.source not in S:
                    continue
                w2 = w + (i,)
                if len(w2) > bound:
                    continue
                if e.target in A.finals and sigma(A, w2) == S:
                    members.append(w2)
                    if len(members) >= limit:
                        return SkeletonSet(S, tuple(members), bound, True)
                if len(w2) < bound:
                    nxt.append((e.target, w2))
        queue = nxt
    return SkeletonSet(S, tuple(members), bound, truncated)


def removable_loop(A: ValenceAutomaton, w: Sequence[int]):
    """A factor ``(i, j)`` of ``w`` that is a simple loop whose removal keeps σ."""
    s = sigma(A, w)
    n = len(w)
    for i in range(n):
        for j in range(i + 1, min(n, i + len(A.states)) + 1):
            if is_simple_loop(A, w[i:j]) and sigma(A, w[:i] + w[j:]) == s:
                return (i, j)
    return None


def irreducible_skeletons(A: ValenceAutomaton, S, length_bound: int | None = None) -> SkeletonSet:
    """Skeletons of S with no removable simple loop.

    Removing loops while keeping σ eventually reaches such a word, so these
    skeletons alone already cover every accepting computation.  Reducibility is
    inherited by extensions, which lets the search prune on prefixes.
    """
    S = frozenset(S)
    bound = paper_bound(A) if length_bound is None else length_bound
    if not S:
        return SkeletonSet(S, ((),) if A.initial in A.finals else (), bound)
    out = A.out_edges()
    members = []
    truncated = False
    stack = [(A.initial, ())]
    while stack:
        here, w = stack.pop()
        for i in out[here]:
            e = A.edges[i]
            if e.target not in S or e.source not in S:
                continue
            w2 = w + (i,)
            if len(w2) > bound:
                truncated = True
                continue
            if removable_loop(A, w2) is not None:
                continue
            if e.target in A.finals and sigma(A, w2) == S:
                members.append(w2)
            stack.append((e.target, w2))
    members.sort(key=lambda w: (len(w), w))
    return SkeletonSet(S, tuple(members), bound, truncated)


def modulus(A: ValenceAutomaton, loops: LoopAlphabet, cap: int = DEFAULT_ORDER_CAP) -> int:
    """lcm of the orders of the loop values; 1 without loops."""
    k = 1
    seen = set()
    for w in loops.loops:
        g = _gamma(A, w)
        key = _element_key(A.monoid, g.payload)
        if key in seen:
            continue
        seen.add(key)
        k = lcm(k, element_order(g, cap))
    return k


def _gamma(A: ValenceAutomaton, w: Sequence[int]):
    m = A.monoid
    p = m.identity_payload()
    for i in w:
        p = m.mul(p, A.edges[i].element.payload)
    return element(m, p, check=False)


def _element_key(m, payload):
    return m.hash_key(payload) if hasattr(m, "hash_key") and not m.canonical else payload


# ---------------------------------------------------------------------------
# interned group elements and value sets as bitmasks


class ElementTable:
    """Interns group elements so that value sets become integer bitmasks."""

    def __init__(self, monoid):
        self.monoid = monoid
        self.exact = monoid.canonical
        self.reps: list = []
        self.index: dict = {}
        self._mul: dict = {}
        self._setmul: dict = {}
        self.one = self.intern(monoid.identity_payload())

    def intern(self, payload) -> int:
        m = self.monoid
        if self.exact:
            i = self.index.get(payload)
            if i is None:
                i = self.index[payload] = len(self.reps)
                self.reps.append(payload)
            return i
        bucket = self.index.setdefault(m.hash_key(payload), [])
        for i in bucket:
            if m.is_identity(m.mul(self.reps[i], m.inverse(payload))):
                return i
        i = len(self.reps)
        self.reps.append(payload)
        bucket.append(i)
        return i

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._mul.get(key)
        if r is None:
            r = self._mul[key] = self.intern(self.monoid.mul(self.reps[i], self.reps[j]))
        return r

    def setmul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        key = (a, b)
        r = self._setmul.get(key)
        if r is None:
            r = 0
            bs = _bits(b)
            for i in _bits(a):
                for j in bs:
                    r |= 1 << self.mul(i, j)
            self._setmul[key] = r
        return r


def _bits(x: int) -> list:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


class Abelianization:
    """Image in H/[H,H] for the finite group H generated by given elements.

    ``None`` from :meth:`build` means H was too large to enumerate.
    """

    def __init__(self, coset: dict, table: dict, zero: int, order: int):
        self.coset = coset
        self.table = table
        self.zero = zero
        self.order = order

    @classmethod
    def build(cls, elements: ElementTable, gens: Sequence[int], cap: int = GROUP_ENUM_CAP):
        t = elements
        elems = _closure(t, [t.one] + list(gens), cap)
        if elems is None:
            return None
        inv = {g: next(h for h in elems if t.mul(g, h) == t.one) for g in elems}
        comms = {t.mul(t.mul(inv[g], inv[h]), t.mul(g, h)) for g in elems for h in elems}
        K = _closure(t, [t.one] + sorted(comms), cap)
        coset: dict = {}
        reps = []
        for g in sorted(elems):
            if g in coset:
                continue
            for x in K:
                coset[t.mul(g, x)] = len(reps)
            reps.append(g)
        table = {(a, b): coset[t.mul(ra, rb)] for a, ra in enumerate(reps) for b, rb in enumerate(reps)}
        return cls(coset, table, coset[t.one], len(reps))

    def image(self, g: int) -> int:
        return self.coset[g]

    def combine(self, a: int, b: int) -> int:
        return self.table[(a, b)]


def _closure(table: ElementTable, gens: Sequence[int], cap: int):
    elems = set(gens)
    frontier = list(elems)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = table.mul(g, h)
                if x not in elems:
                    elems.add(x)
                    if len(elems) > cap:
                        return None
                    nxt.append(x)
        frontier = nxt
    return elems


# ---------------------------------------------------------------------------
# membership in U_v


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _subvectors(nu: tuple, allowed: frozenset | None = None):
    ranges = [range(x + 1) if (allowed is None or i in allowed) else range(1) for i, x in enumerate(nu)]
    return product(*ranges)


class InsertionDP:
    """Value sets of all words obtained from a skeleton by inserting simple loops.

    Every such word is the skeleton with a block at each position; a block at
    state q is a sequence of loops based at q, and each loop carries a block at
    every inner position.  Skeletons and loops are both *frames*: token lists of
    edges and blocks.  ``value(nu)`` is the set of storage values (a bitmask
    over interned elements) of all words whose loop-symbol counts are ``nu``.
    """

    def __init__(self, A: ValenceAutomaton, v: tuple, loops: LoopAlphabet, table: ElementTable, memo=None):
        self.A = A
        self.v = tuple(v)
        self.table = table
        self.dim = len(loops.symbols)
        self.edge_val = [table.intern(e.element.payload) for e in A.edges]
        self.loops_at = {q: loops.loops_at(A, q) for q in A.states}
        # symbols that can occur anywhere inside a block based at q
        avail = {q: {y for y, _ in self.loops_at[q]} for q in A.states}
        changed = True
        while changed:
            changed = False
            for q in avail:
                for _y, w in self.loops_at[q]:
                    for i in w[:-1]:
                        extra = avail[A.edges[i].target] - avail[q]
                        if extra:
                            avail[q] |= extra
                            changed = True
        self.avail = {q: frozenset(s) for q, s in avail.items()}
        self._frames: dict = {}
        self.top = self._frame(("top", self.v), self._skeleton_tokens())
        # prefix values do not depend on the skeleton outside its own frame,
        # so skeletons of one state set may share a memo
        self._pre = memo if memo is not None else {}

    def _skeleton_tokens(self) -> tuple:
        toks = [("block", self.A.initial)]
        for i in self.v:
            toks.append(("edge", i))
            toks.append(("block", self.A.edges[i].target))
        return tuple(toks)

    def _loop_tokens(self, w: tuple) -> tuple:
        toks = []
        for n, i in enumerate(w):
            toks.append(("edge", i))
            if n < len(w) - 1:
                toks.append(("block", self.A.edges[i].target))
        return tuple(toks)

    def _frame(self, key, tokens):
        fr = self._frames.get(key)
        if fr is None:
            seen: list = [frozenset()]
            for kind, x in tokens:
                seen.append(seen[-1] | self.avail[x] if kind == "block" else seen[-1])
            fr = self._frames[key] = (key, tokens, tuple(seen))
        return fr

    def loop_frame(self, w: tuple):
        return self._frame(("loop", w), self._loop_tokens(w))

    def pre(self, frame, t: int, nu: tuple) -> int:
        """Values of the first ``t`` tokens of ``frame`` using exactly ``nu``."""
        key, tokens, seen = frame
        mk = (key, t, nu)
        r = self._pre.get(mk)
        if r is not None:
            return r
        tab = self.table
        allowed = seen[t]
        if any(c and i not in allowed for i, c in enumerate(nu)):
            r = 0
        elif t == 0:
            r = 1 << tab.one
        else:
            kind, x = tokens[t - 1]
            if kind == "edge":
                r = tab.setmul(self.pre(frame, t - 1, nu), 1 << self.edge_val[x])
            else:
                # the block is empty or ends with one more loop based at x
                r = self.pre(frame, t - 1, nu)
                for y, w in self.loops_at[x]:
                    if not nu[y]:
                        continue
                    rest = list(nu)
                    rest[y] -= 1
                    rest = tuple(rest)
                    lf = self.loop_frame(w)
                    inner = lf[2][-1]
                    for nu1 in _subvectors(rest, inner):
                        lv = self.pre(lf, len(lf[1]), nu1)
                        if lv:
                            r |= tab.setmul(self.pre(frame, t, _sub(rest, nu1)), lv)
        self._pre[mk] = r
        return r

    def value(self, nu: tuple) -> int:
        return self.pre(self.top, len(self.top[1]), nu)

    # witness reconstruction -------------------------------------------------
    #
    # A tree is a list ``[(edge, block), ...]``; a block is a list of
    # ``(loop_edges, tree)``.

    def witness(self, nu: tuple, g: int):
        """``(tree, lead_block)`` realising ``nu`` with value ``g``."""
        parts = self._wit(self.top, len(self.top[1]), nu, g)
        lead = parts[0]
        tree = [(parts[n], parts[n + 1]) for n in range(1, len(parts), 2)]
        return tree, lead

    def _loop_tree(self, w: tuple, nu: tuple, g: int) -> list:
        lf = self.loop_frame(w)
        parts = self._wit(lf, len(lf[1]), nu, g)
        tree = []
        for n in range(0, len(parts), 2):
            tree.append((parts[n], parts[n + 1] if n + 1 < len(parts) else []))
        return tree

    def _wit(self, frame, t: int, nu: tuple, g: int) -> list:
        tab = self.table
        if t == 0:
            return []
        _key, tokens, _seen = frame
        kind, x = tokens[t - 1]
        if kind == "edge":
            for h in _bits(self.pre(frame, t - 1, nu)):
                if tab.mul(h, self.edge_val[x]) == g:
                    return self._wit(frame, t - 1, nu, h) + [x]
            raise AssertionError("witness lost at an edge")
        if self.pre(frame, t - 1, nu) >> g & 1:
            return self._wit(frame, t - 1, nu, g) + [[]]
        for y, w in self.loops_at[x]:
            if not nu[y]:
                continue
            rest = list(nu)
            rest[y] -= 1
            rest = tuple(rest)
            lf = self.loop_frame(w)
            for nu1 in _subvectors(rest, lf[2][-1]):
                lv = self.pre(lf, len(lf[1]), nu1)
                if not lv:
                    continue
                before = self.pre(frame, t, _sub(rest, nu1))
                for h in _bits(before):
                    for a in _bits(lv):
                        if tab.mul(h, a) == g:
                            parts = self._wit(frame, t, _sub(rest, nu1), h)
                            parts[-1] = parts[-1] + [(w, self._loop_tree(w, nu1, a))]
                            return parts
        raise AssertionError("witness lost in a block")


def flatten(tree, lead=()) -> tuple:
    """Edge word of a witness tree with an optional leading block."""
    out: list = []
    _flat_block(lead, out)
    for edge, blk in tree:
        out.append(edge)
        _flat_block(blk, out)
    return tuple(out)


def _flat_block(blk, out):
    for _loop, tree in blk:
        for edge, inner in tree:
            out.append(edge)
            _flat_block(inner, out)


def insertion_steps(v: tuple, tree, lead=()) -> list:
    """Words ``v = w0 ⊢ w1 ⊢ ... ⊢ w``, one simple loop inserted per step."""
    items = [[edge, list(blk)] for edge, blk in tree]
    pending_lead = list(lead)
    words = [tuple(v)]
    while True:
        if pending_lead:
            blk, at = pending_lead, 0
        else:
            idx = next((n for n, it in enumerate(items) if it[1]), None)
            if idx is None:
                break
            blk, at = items[idx][1], idx + 1
        _loop, ltree = blk.pop(0)
        remaining = blk[:]
        blk.clear()
        new = [[edge, list(b)] for edge, b in ltree]
        # loops after this one in the same block now follow its last edge
        new[-1][1] = remaining
        items[at:at] = new
        words.append(tuple(edge for edge, _ in items))
    return words


def check_derivation(A: ValenceAutomaton, words: list) -> bool:
    """Each consecutive pair satisfies one simple-loop insertion with σ kept."""
    for v, w in zip(words, words[1:]):
        if sigma(A, v) != sigma(A, w) or len(w) <= len(v):
            return False
        n = len(w) - len(v)
        ok = False
        for i in range(len(v) + 1):
            if w[:i] == v[:i] and w[i + n :] == v[i:] and is_simple_loop(A, w[i : i + n]):
                s = w[i : i + n]
                here = A.edges[v[i - 1]].target if i > 0 else (A.edges[v[0]].source if v else A.initial)
                if A.edges[s[0]].source == here:
                    ok = True
                    break
        if not ok:
            return False
    return True


def _vectors_of_size(dim: int, n: int):
    """All vectors of total ``n`` in lexicographic order."""
    if dim == 0:
        if n == 0:
            yield ()
        return
    if dim == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _vectors_of_size(dim - 1, n - first):
            yield (first,) + rest


@dataclass
class UvResult:
    minimals: list
    radius: int
    audit_violations: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    derivations_ok: bool = True
    tested: int = 0


class UvSearch:
    """Membership in U_v and its minimal elements."""

    def __init__(self, A, v, loops: LoopAlphabet, k: int, table: ElementTable, abel=None, memo=None):
        self.A = A
        self.v = tuple(v)
        self.loops = loops
        self.k = k
        self.table = table
        self.dp = InsertionDP(A, self.v, loops, table, memo)
        self.dim = len(loops.symbols)
        self.abel = abel
        self.vectors = [loops.parikh(j).counts for j in range(self.dim)]
        self._by_target: dict = {}
        if abel is not None:
            self.v_img = abel.image(_fold(table.mul, (self.dp.edge_val[i] for i in self.v), table.one))
            self.y_img = [
                abel.image(_fold(table.mul, (self.dp.edge_val[i] for i in loops.phi[j]), table.one))
                for j in range(self.dim)
            ]

    def _abelian_ok(self, mu: tuple) -> bool:
        if self.abel is None:
            return True
        acc = self.v_img
        for j, c in enumerate(mu):
            for _ in range(c % self.abel.order):
                acc = self.abel.combine(acc, self.y_img[j])
        return acc == self.abel.zero

    def _target(self, mu: tuple) -> tuple:
        target = [0] * len(self.loops.edge_alphabet)
        for j, c in enumerate(mu):
            for x, p in enumerate(self.vectors[j]):
                target[x] += c * p
        return tuple(target)

    def realising(self, mu: tuple):
        """A ν with the same edge Parikh as μ whose insertions can reach 1, or None.

        Any such ν witnesses μ ∈ U_v, since U_v only constrains the Parikh
        vector of the final word.
        """
        target = self._target(mu)
        if target in self._by_target:
            return self._by_target[target]
        hit = None
        if self._abelian_ok(mu):
            for nu in _decompositions(target, self.vectors):
                if self.dp.value(nu) >> self.table.one & 1:
                    hit = nu
                    break
        self._by_target[target] = hit
        return hit

    def member(self, mu: tuple) -> bool:
        return self.realising(mu) is not None

    def witness_word(self, mu: tuple):
        nu = self.realising(mu)
        if nu is None:
            return None
        tree, lead = self.dp.witness(nu, self.table.one)
        return tree, lead

    def search(self, radius: int, audit: bool = True, check_witnesses: bool = True) -> UvResult:
        found: list = []
        # ≤_k only relates vectors in the same residue class mod k
        by_class: dict = {}
        alive: dict = {}
        res = UvResult([], radius)
        k = self.k
        for n in range(radius + 1):
            for mu in _vectors_of_size(self.dim, n):
                cls = tuple(c % k for c in mu)
                if cls not in alive:
                    # loop values have order dividing k, so the abelian image is a class invariant
                    alive[cls] = self._abelian_ok(cls)
                if not alive[cls]:
                    continue
                peers = by_class.get(cls, ())
                if any(all(x <= y for x, y in zip(m, mu)) for m in peers):
                    continue
                res.tested += 1
                if self.member(mu):
                    found.append(mu)
                    by_class.setdefault(cls, []).append(mu)
        res.minimals = [Multiset(self.loops.symbols, m) for m in found]
        if check_witnesses:
            for m in found:
                tree, lead = self.witness_word(m)
                words = insertion_steps(self.v, tree, lead)
                w = words[-1]
                ok = (
                    w == flatten(tree, lead)
                    and check_derivation(self.A, words)
                    and _gamma(self.A, w).is_identity()
                    and _edge_parikh(w, self.loops.edge_alphabet).counts
                    == _add(_edge_parikh(self.v, self.loops.edge_alphabet).counts, self._target(m))
                )
                res.witnesses[m] = w
                res.derivations_ok &= ok
        if audit:
            for m in found:
                for j in range(self.dim):
                    up = list(m)
                    up[j] += self.k
                    up = tuple(up)
                    if sum(up) <= radius and not self.member(up):
                        res.audit_violations.append((m, j))
        return res


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _leq_k_tuple(a, b, k) -> bool:
    return all(x <= y and (y - x) % k == 0 for x, y in zip(a, b))


def _decompositions(target: tuple, vectors: list) -> list:
    """All ν with Σ ν_j·vectors[j] = target, in lexicographic order."""
    out: list = []
    dim = len(vectors)
    # coordinates each suffix of the vector list can still reach
    cover = [frozenset()] * (dim + 1)
    for j in range(dim - 1, -1, -1):
        cover[j] = cover[j + 1] | {x for x, c in enumerate(vectors[j]) if c}

    def go(j, rest, acc):
        if any(r and x not in cover[j] for x, r in enumerate(rest)):
            return
        if j == dim:
            out.append(tuple(acc))
            return
        p = vectors[j]
        bound = min((r // c for r, c in zip(rest, p) if c), default=0)
        for m in range(bound + 1):
            go(j + 1, tuple(r - m * c for r, c in zip(rest, p)), acc + [m])

    go(0, target, [])
    return out


# ---------------------------------------------------------------------------
# the full extraction


@dataclass
class StateSetData:
    S: frozenset
    loops: LoopAlphabet
    skeletons: SkeletonSet
    k: int
    radius: int
    minimals: dict
    audit_violations: list
    derivations_ok: bool


@dataclass
class ExtractionResult:
    per_state_set: list
    edge_level: SemilinearSet
    assembled: SemilinearSet
    complete_within_radius: int | None
    skeleton_bound: int
    truncated: bool

    @property
    def audit_violations(self) -> list:
        return [(d.S, v) for d in self.per_state_set for v in d.audit_violations]

    @property
    def derivations_ok(self) -> bool:
        return all(d.derivations_ok for d in self.per_state_set)


def _supported(m) -> bool:
    if isinstance(m, (PermGroup, Grigorchuk)):
        return True
    if isinstance(m, DirectProduct):
        return all(_supported(f) for f in m.factors)
    return False


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("VALENCE_THREADS", "1")))
    except ValueError:
        return 1


def extract(
    A: ValenceAutomaton,
    radius: int | None = None,
    cap: int = DEFAULT_ORDER_CAP,
    skeleton_bound: int | None = None,
    audit: bool = True,
) -> ExtractionResult:
    """Semilinear representation of the Parikh image of ``L(A)``.

    ``radius`` bounds the total size of searched loop multisets; by default it
    is ``2·k·|Y_S|`` for each state set.
    """
    if not _supported(A.monoid):
        raise MonoidError(f"extraction needs a torsion group, got {A.monoid.kind}")
    Ahat = hat_automaton(A)
    bound = paper_bound(A) if skeleton_bound is None else skeleton_bound
    edge_alphabet = Ahat.alphabet
    subsets = [frozenset(c) for n in range(len(A.states) + 1) for c in combinations(A.states, n)]

    def work(S):
        table = ElementTable(A.monoid)
        loops = simple_loops(Ahat, S)
        skel = irreducible_skeletons(Ahat, S, bound)
        k = modulus(Ahat, loops, cap)
        r = 2 * k * len(loops.symbols) if radius is None else radius
        abel = None
        if skel.members and len(loops.symbols):
            abel = Abelianization.build(table, [table.intern(e.element.payload) for e in A.edges])
        minimals = {}
        violations = []
        ok = True
        memo: dict = {}
        for v in skel.members:
            res = UvSearch(Ahat, v, loops, k, table, abel, memo).search(r, audit=audit)
            minimals[v] = res.minimals
            violations.extend((v, m, j) for m, j in res.audit_violations)
            ok &= res.derivations_ok
        return StateSetData(S, loops, skel, k, r, minimals, violations, ok)

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            data = list(pool.map(work, subsets))
    else:
        data = [work(S) for S in subsets]

    comps = []
    for d in data:
        phi = d.loops.phi_tilde()
        for v, mins in d.minimals.items():
            if not mins:
                continue
            base = _edge_parikh(v, edge_alphabet).counts
            up = upward_closure_k(mins, d.k, d.loops.symbols)
            img = morph_image(up, phi, edge_alphabet)
            for c in img.components:
                comps.append(LinearSet(_add(base, c.base), c.periods))
    edge_level = SemilinearSet(edge_alphabet, tuple(comps)).canonical()
    assembled = morph_image(edge_level, edge_parikh_map(A), A.alphabet).canonical()
    # state sets without loops or skeletons are exact at any radius
    searched = [d.radius for d in data if d.skeletons.members and d.loops.symbols]
    complete = None if radius is not None and radius < 0 else min(searched, default=0)
    return ExtractionResult(
        data, edge_level, assembled, complete, bound, any(d.skeletons.truncated for d in data)
    )
