"""Reduced plane trees, contractions, reconstruction, shuffles."""

import itertools
import random
from math import comb

import pytest

from agealg.errors import InputError
from agealg.planar import (EMPTY, LEAF, SCHRODER, contract, default_sample,
                           depth, embed, enumerate_reduced, leaves,
                           no_pair_monopart, planar_profile,
                           planar_profile_report, reconstruct_from_triples,
                           reduce_tree, shuffle_constant, tree_from_text,
                           tree_restrict, tree_to_text)

CARET = (LEAF, (LEAF, LEAF))      # (o,(o,o))
TENT = ((LEAF, LEAF), LEAF)       # ((o,o),o)


def test_text_round_trip():
    for text in ("o", "(o,o)", "(o,(o,o))", "((o,o),o,(o,o,o))", ""):
        assert tree_to_text(tree_from_text(text)) == text


def test_reduce_examples():
    assert reduce_tree((LEAF, LEAF)) == (LEAF, LEAF)
    assert reduce_tree(((((LEAF,),),),)) == LEAF
    assert reduce_tree(((LEAF, LEAF),)) == (LEAF, LEAF)


def test_contract_examples():
    assert contract([(1,)]) == LEAF
    assert contract([(2, 1), (2, 3)]) == (LEAF, LEAF)
    # the displayed witness: {a,c,d} vs {b,c,d} with c,d in a copy between
    assert contract([(1,), (2, 1), (2, 3)]) == CARET
    assert contract([(3,), (2, 1), (2, 3)]) == TENT


def test_contract_rejects_duplicates_and_bad_addresses():
    with pytest.raises(InputError):
        contract([(1,), (1,)])
    with pytest.raises(InputError):
        contract([(2,)])      # even index cannot end an address
    with pytest.raises(InputError):
        contract([(1, 1)])    # odd index cannot continue


def test_enumerate_counts_match_schroder():
    for n in range(8):
        assert len(enumerate_reduced(n)) == SCHRODER[n]


def test_enumerate_three_leaves_exact():
    assert sorted(map(tree_to_text, enumerate_reduced(3))) == [
        "((o,o),o)", "(o,(o,o))", "(o,o,o)"]


def test_enumerate_is_duplicate_free():
    for n in range(7):
        trees = enumerate_reduced(n)
        assert len(set(trees)) == len(trees)
        assert all(leaves(t) == n for t in trees)


# ---------------------------------------------------------------------------
# embeddings and profiles


def test_embed_round_trip_small():
    for n in range(6):
        for tree in enumerate_reduced(n):
            assert contract(embed(tree)) == tree


def test_embed_round_trip_shifted():
    # alternative embeddings: adding a constant even offset to the first
    # index of every address preserves order, parity and all meets
    rng = random.Random(64)
    for tree in enumerate_reduced(4):
        addresses = embed(tree)
        for _ in range(3):
            bump = rng.randrange(1, 4) * 2
            shifted = [(a[0] + bump,) + a[1:] for a in addresses]
            assert contract(shifted) == tree


def test_planar_profile_matches_schroder():
    for n in range(1, 5):
        assert planar_profile(n) == SCHRODER[n]


def test_planar_profile_poor_sample_reports_undercount():
    count, report = planar_profile_report(4, depth_budget=1)
    assert count < SCHRODER[4]
    assert report["missing"]


def test_profile_one_point():
    assert planar_profile(1) == 1


# ---------------------------------------------------------------------------
# triple reconstruction


def triples_of(tree):
    d = leaves(tree)
    return {
        key: tree_restrict(tree, key)
        for key in itertools.combinations(range(1, d + 1), 3)
    }


def test_reconstruct_four_leaf_round_trip():
    for tree in enumerate_reduced(4):
        assert reconstruct_from_triples(4, triples_of(tree)) == tree


def test_reconstruct_d3_identity():
    for tree in enumerate_reduced(3):
        assert reconstruct_from_triples(3, {(1, 2, 3): tree}) == tree


def test_reconstruct_inconsistent_mix():
    t1, t2 = enumerate_reduced(5)[0], enumerate_reduced(5)[-1]
    mixed = triples_of(t1)
    bad = triples_of(t2)
    key = (1, 2, 3)
    if mixed[key] == bad[key]:
        key = (2, 3, 5)
    mixed[key] = bad[key]
    if mixed != triples_of(t1):
        assert reconstruct_from_triples(5, mixed) is None


def test_reconstruct_round_trip_up_to_six_leaves():
    for n in (5, 6):
        for tree in enumerate_reduced(n):
            assert reconstruct_from_triples(n, triples_of(tree)) == tree


# ---------------------------------------------------------------------------
# shuffle constants


def test_point_shuffle_point():
    assert shuffle_constant(LEAF, LEAF, (LEAF, LEAF)) == 2


def test_empty_tree_is_unit():
    for tree in enumerate_reduced(3):
        assert shuffle_constant(EMPTY, tree, tree) == 1
        other = enumerate_reduced(3)[0]
        if other != tree:
            assert shuffle_constant(EMPTY, other, tree) == 0


def test_point_shuffle_cherry():
    # every 2-subset of a 3-set contracts to the unique 2-leaf tree, so the
    # three singleton splits all qualify, for each of the three targets
    for tree in enumerate_reduced(3):
        assert shuffle_constant(LEAF, (LEAF, LEAF), tree) == 3


def test_shuffle_commutes():
    for t1 in enumerate_reduced(1) + enumerate_reduced(2):
        for t2 in enumerate_reduced(2):
            for target in enumerate_reduced(leaves(t1) + leaves(t2)):
                assert shuffle_constant(t1, t2, target) == \
                    shuffle_constant(t2, t1, target)


def test_shuffle_split_count_identity():
    # for a fixed target every split has some pair of types, so summing the
    # constants over all (t1, t2) recovers the number of splits
    for target in enumerate_reduced(4):
        total = sum(
            shuffle_constant(t1, t2, target)
            for t1 in enumerate_reduced(1)
            for t2 in enumerate_reduced(3))
        assert total == comb(4, 1)
    for target in enumerate_reduced(5)[:6]:
        total = sum(
            shuffle_constant(t1, t2, target)
            for t1 in enumerate_reduced(2)
            for t2 in enumerate_reduced(3))
        assert total == comb(5, 2)


def test_leaf_count_mismatch_rejected():
    with pytest.raises(InputError):
        shuffle_constant(LEAF, LEAF, CARET)


# ---------------------------------------------------------------------------
# no two-element monomorphic part


def test_no_pair_monopart_on_samples():
    assert no_pair_monopart(default_sample(3))
    assert no_pair_monopart(default_sample(4))
    assert no_pair_monopart(embed(enumerate_reduced(6)[17]))


def test_no_pair_adjacent_leaves_fall_back():
    # (1) and (2,1) have no host leaf strictly between them; the sibling-fan
    # witness still separates
    assert no_pair_monopart([(1,), (2, 1), (3,), (5,)])


def test_no_pair_requires_four_leaves():
    with pytest.raises(InputError):
        no_pair_monopart([(1,)])


def test_witness_already_in_sample():
    sample = [(1,), (3,), (2, 1), (2, 3), (4, 1)]
    assert no_pair_monopart(sample)
