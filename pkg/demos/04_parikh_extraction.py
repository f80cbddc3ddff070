"""Extracting a semilinear Parikh image from an automaton over a finite group.

The automaton reads a's while flipping a bit in Z2 and b's freely, and
accepts once the bit is back to 0. So the a-count has to be even.
"""

from valence.corpus import load_corpus
from valence.io import semilinear_to_json
from valence.semilinear import points_in_box
from valence.torsion import extract

A = load_corpus()["parity_z2"].build()
res = extract(A)
print("state sets considered:", [sorted(d.S) for d in res.per_state_set])
for d in res.per_state_set:
    if d.S:
        print(f"  S={sorted(d.S)} loops={len(d.loops.symbols)} modulus={d.k} skeletons={len(d.minimals)}")
print("assembled:", semilinear_to_json(res.assembled))
pts = sorted(points_in_box(res.assembled, 4))
print("points with both counts at most 4:", pts)
assert all(a % 2 == 0 for a, _ in pts)
print("audit clean:", not res.audit_violations, " derivations replay:", res.derivations_ok)
