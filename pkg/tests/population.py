"""Seeded random valence automata for the extraction checks."""

import random
from itertools import permutations

from valence.automata import ValenceAutomaton, enumerate_language
from valence.monoids import PermGroup, element
from valence.semilinear import parikh

INPUTS = ("", "a", "b", "ab")
ALPHABET = ("a", "b")
BOX = 6
GROUPS = {"trivial": PermGroup(1), "Z2": PermGroup(2), "S3": PermGroup(3)}


def random_automaton(rng: random.Random, group: PermGroup) -> ValenceAutomaton:
    n = rng.randint(1, 3)
    states = tuple(f"q{i}" for i in range(n))
    elems = [element(group, p) for p in permutations(range(group.degree))]
    edges = []
    for _ in range(rng.randint(1, 4)):
        edges.append((rng.choice(states), tuple(rng.choice(INPUTS)), rng.choice(elems), rng.choice(states)))
    finals = {q for q in states if rng.random() < 0.5} or {rng.choice(states)}
    return ValenceAutomaton(states, ALPHABET, group, edges, states[0], finals)


def population(group_name: str, count: int = 50, seed: int = 2024) -> list:
    rng = random.Random(f"{seed}-{group_name}")
    return [random_automaton(rng, GROUPS[group_name]) for _ in range(count)]


def box_oracle(A: ValenceAutomaton, bound: int = BOX) -> set:
    """Parikh vectors in the box of all accepted words, by exhaustive search.

    With a finite group a shortest accepting run never repeats a configuration,
    so ``|Q|·|G|·(n+1)`` steps suffice for words of length ``n``.
    """
    max_len = bound * len(A.alphabet)
    size = 1
    for i in range(2, A.monoid.degree + 1):
        size *= i
    steps = len(A.states) * size * (max_len + 1)
    words = enumerate_language(A, max_len, steps)
    vecs = {parikh(w, A.alphabet).counts for w in words}
    return {v for v in vecs if max(v, default=0) <= bound}
