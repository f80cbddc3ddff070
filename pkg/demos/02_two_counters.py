"""Two independent counters via a direct product of bicyclic monoids.

The automaton reads a^n b^m c^n d^m: the first counter matches a against c,
the second matches b against d. The language is not context-free, but its
Parikh image is still a nice linear set.
"""

from valence import accepts_bounded, enumerate_language
from valence.corpus import load_corpus

A = load_corpus()["anbmcndm"].build()
print("storage:", A.monoid)
for word in ["aabccd", "abbcdd", "abcdd"]:
    print(f"{word:8}", accepts_bounded(A, word, 20).verdict.value)

lang = sorted(("".join(w) for w in enumerate_language(A, 6, 20)), key=lambda w: (len(w), w))
print("words up to length 6:", lang)
