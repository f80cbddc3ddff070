"""A partially blind counter with the bicyclic monoid.

x pushes, x̄ pops, and a run is accepted only if the storage returns to the
identity. A pop on an empty counter is not an error, it just lands on an
element that can never come back to 1.
"""

from valence import Bicyclic, accepts_bounded, enumerate_language, replay
from valence.corpus import load_corpus
from valence.automata import tokenize
from valence.monoids import generator, product_of

B = Bicyclic()
for word in ["xx̄", "xxx̄x̄", "x̄x", "xx̄x̄x"]:
    print(f"{word:8} reduces to {product_of(B, [generator(B, c) for c in tokenize(('x', 'x̄'), word)]).payload}")

dyck = load_corpus()["dyck"].build()
print()
for word in ["xxx̄x̄", "xx̄x̄x"]:
    res = accepts_bounded(dyck, word, max_steps=16)
    print(f"{word:8} {res.verdict.value:24} run={res.run} replays={replay(dyck, res.run, word) if res.run else '-'}")

words = sorted(("".join(w) for w in enumerate_language(dyck, 6, 16)), key=lambda w: (len(w), w))
print("\nDyck words up to length 6:", words)
