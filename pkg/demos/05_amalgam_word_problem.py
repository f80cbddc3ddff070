"""Deciding whether a word is the identity in a free product with amalgamation.

First a free product of two bicyclic monoids, then Z2 and Z4 glued along
their subgroups of order 2, which is just Z4 again.
"""

from valence.amalgam import identity_membership, identity_membership_trace, replay_derivation
from valence.corpus import load_corpus

corpus = load_corpus()
free = corpus["free_bb"].build()
for w in ["xzz̄x̄", "xzx̄z̄", "zxx̄z̄zz̄"]:
    print(f"B*B   {w:10} identity: {identity_membership(free, w)}")

glued = corpus["z2_z4_amalgam"].build()
for w in ["tts", "ts", "tttt", "sttss"]:
    trace = identity_membership_trace(glued, w)
    extra = f"  derivation replays: {replay_derivation(glued, trace, w)}" if trace.accepted else ""
    print(f"Z2*Z4 {w:10} identity: {trace.accepted}{extra}")
