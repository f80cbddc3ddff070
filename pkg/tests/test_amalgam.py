import itertools
import random

import pytest

from valence.amalgam import (
    AmalgamSpec,
    BlockKind,
    FiniteSubgroup,
    blocks,
    factor_block_value,
    grammar_productions,
    identity_membership,
    identity_membership_trace,
    replay_derivation,
    start_symbol,
)
from valence.monoids import Bicyclic, Integers, PermGroup, element, generator, identity, product_of

B, Z = Bicyclic(), Integers()
Z2, Z4, S3 = PermGroup(2), PermGroup(4), PermGroup(3)


def free_bb():
    return AmalgamSpec(
        (B, B),
        ({"x": generator(B, "x"), "x̄": generator(B, "x̄")}, {"z": generator(B, "x"), "z̄": generator(B, "x̄")}),
    )


def z2_z4(symbol_for_f=True):
    s, t = element(Z2, (1, 0)), element(Z4, (1, 2, 3, 0))
    F = FiniteSubgroup(
        ("1", "f"),
        ({"1": identity(Z2), "f": s}, {"1": identity(Z4), "f": t * t}),
        ({"f": "s"} if symbol_for_f else {}, {}),
    )
    return AmalgamSpec((Z2, Z4), ({"s": s}, {"t": t}), F)


def test_block_values():
    spec = free_bb()
    assert factor_block_value(spec, 0, ("x", "x̄")).kind is BlockKind.IN_F
    zz = AmalgamSpec((Z, Z), ({"p": element(Z, 1)}, {"q": element(Z, 1)}))
    assert factor_block_value(zz, 0, ("p",)).kind is BlockKind.NOT_IN_F
    with pytest.raises(ValueError):
        factor_block_value(spec, 0, ("z",))


def test_block_value_in_s3_subgroup():
    tr = element(S3, (1, 0, 2))
    F = FiniteSubgroup(("1", "f"), ({"1": identity(S3), "f": tr}, {"1": identity(Z2), "f": element(Z2, (1, 0))}))
    spec = AmalgamSpec((S3, Z2), ({"r": element(S3, (1, 2, 0)), "t": tr}, {"u": element(Z2, (1, 0))}), F)
    # r·t·r·r is some transposition; only t itself is the image of f
    assert factor_block_value(spec, 0, ("t",)).f == "f"
    val = product_of(S3, [element(S3, (1, 2, 0)), tr, element(S3, (1, 2, 0)), element(S3, (1, 2, 0))])
    want = BlockKind.IN_F if val == tr else BlockKind.NOT_IN_F
    assert factor_block_value(spec, 0, ("r", "t", "r", "r")).kind is want


def test_membership_examples():
    spec = free_bb()
    assert identity_membership(spec, "xzz̄x̄")
    assert not identity_membership(spec, "xzx̄z̄")
    assert identity_membership(spec, "")


def test_amalgam_over_z2():
    spec = z2_z4()
    # t^2 and s name the same element of F
    assert identity_membership(spec, "tts")
    assert identity_membership(spec, "stt")
    assert not identity_membership(spec, "ts")


def test_amalgam_brute_force():
    # s is identified with t^2, so the amalgam is the cyclic group of order 4
    spec = z2_z4()
    val = {"s": 2, "t": 1}
    for n in range(9):
        for w in itertools.product("st", repeat=n):
            assert identity_membership(spec, w) == (sum(val[c] for c in w) % 4 == 0)


def test_mismatched_embeddings_rejected():
    s, t = element(Z2, (1, 0)), element(Z4, (1, 2, 3, 0))
    with pytest.raises(ValueError):
        # t is not of order 2, so the multiplication tables differ
        AmalgamSpec((Z2, Z4), ({"s": s}, {"t": t}), FiniteSubgroup(("1", "f"), ({"1": identity(Z2), "f": s}, {"1": identity(Z4), "f": t})))
    with pytest.raises(ValueError):
        AmalgamSpec((Z2, Z4), ({"s": s}, {"t": t}), FiniteSubgroup(("1", "f"), ({"1": s, "f": s}, {"1": identity(Z4), "f": t * t})))


def test_productions():
    assert len(grammar_productions(free_bb())) == 2
    spec = z2_z4()
    prods = grammar_productions(spec)
    assert len(prods) == 2 * len(spec.labels) == 4
    assert start_symbol(spec) == "e0"
    assert {(p.lhs, p.factor, p.f) for p in grammar_productions(free_bb())} == {("e0", 1, "1"), ("e1", 0, "1")}


def test_blocks_alternate():
    spec = free_bb()
    w = spec.tokenize("xx̄zzx")
    assert blocks(spec, w) == [(0, 0, 2), (1, 2, 4), (0, 4, 5)]


@pytest.mark.parametrize("make", [free_bb, z2_z4])
def test_accepted_words_rederive(make):
    spec = make()
    rng = random.Random(3)
    syms = [s for s in spec.all_symbols() if not s.startswith("e")]
    accepted = 0
    for _ in range(3000):
        w = tuple(rng.choice(syms) for _ in range(rng.randint(0, 10)))
        trace = identity_membership_trace(spec, w)
        if trace.accepted:
            accepted += 1
            assert replay_derivation(spec, trace, w)
            if len(blocks(spec, w)) >= 2:
                # syllable property: some block of an identity word lands in F
                assert any(
                    factor_block_value(spec, i, w[a:b]).kind is BlockKind.IN_F for i, a, b in blocks(spec, w)
                )
    assert accepted > 20
