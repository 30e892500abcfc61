import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from masscodec.bhcode import BhCodebook
from masscodec.codec import (
    BalancedPair,
    balance_report,
    block_balance,
    decode_mixture,
    encode,
    encode_codebook,
    next_square,
    pad_to_square,
    plain_layout,
    separate_pool,
    sum_from_prefixes,
    unbalance,
)
from masscodec.core import (
    BitString,
    CompositionMultiset,
    full_multiset,
    is_dyck,
    pool,
    prefix_multiset,
    suffix_multiset,
)
from masscodec.errors import (
    CountMismatch,
    InconsistentPoolSize,
    NegativeIncrement,
    UnsupportedCodebook,
)


def test_block_balance_hand_checked_cases():
    cases = [("0111", "0100", "01"), ("0011", "0011", "00"), ("0000", "0011", "01")]
    for s, u, r in cases:
        pair = block_balance(s)
        assert (str(pair.u), str(pair.r)) == (u, r)


def test_unbalance_inverts_block_balance_exhaustively_n4():
    for v in range(16):
        s = BitString.from_int(v, 4)
        pair = block_balance(s)
        assert unbalance(pair.u, pair.r) == s


def test_unbalance_trivial_flags():
    assert unbalance("0110", "00") == BitString("0110")


def test_unbalance_commutes_with_xor_n4():
    # on mod-2 mixtures the un-flip recovers the mod-2 sum of the sources
    for a_val, b_val in itertools.combinations(range(16), 2):
        a, b = BitString.from_int(a_val, 4), BitString.from_int(b_val, 4)
        pa, pb = block_balance(a), block_balance(b)
        mixed = unbalance(pa.u ^ pb.u, pa.r ^ pb.r)
        assert mixed == a ^ b


def test_padding_policy():
    padded, pad = pad_to_square(BitString("11111"))
    assert pad == 4 and str(padded) == "000011111"
    assert next_square(8) == (9, 3)
    assert next_square(16) == (16, 4)


def test_encode_hand_assembled_example():
    cw = encode("0111")
    assert str(cw.bits) == "11111" + "01" + "0100" + "1111" + "0000000"
    assert cw.layout.N == 22
    assert cw.bits.weight() == 11
    assert is_dyck(cw.bits)


def test_encode_length_formula_n16():
    rng = random.Random(0)
    s = BitString.random(16, rng)
    cw = encode(s)
    assert cw.layout.N == 50
    assert cw.bits.weight() == 25


def test_layout_json_round_trip():
    from masscodec.codec import McLayout

    lay = plain_layout(8)
    obj = lay.to_json_obj()
    assert obj["pad"] == 1 and obj["N"] == 36
    assert McLayout.from_json_obj(obj) == lay


@pytest.mark.parametrize("n", [4, 16, 36])
def test_balancing_invariants_random(n):
    rng = random.Random(n)
    trials = 16 if n == 4 else 400
    strings = (
        [BitString.from_int(v, 4) for v in range(16)]
        if n == 4
        else [BitString.random(n, rng) for _ in range(trials)]
    )
    for s in strings:
        rep = balance_report(s)
        root = rep.root
        assert rep.boundary_rds_max <= root
        assert rep.u_rds_max <= (3 * root) // 2
        # the head RDS can touch zero (e.g. s=0001: all-zero flags meet the
        # full data dip), but never goes negative and only at even offsets,
        # which keeps the codeword a Dyck string
        assert rep.v_rds_min >= 0
        assert rep.v_rds_max <= 5 * root
        assert rep.dyck


def test_head_rds_zero_touch_counterexample():
    # the strict form "head RDS > 0" fails exactly here
    rep = balance_report(BitString("0001"))
    assert rep.v_rds_min == 0


@given(st.integers(0, 2**16 - 1))
@settings(max_examples=60, deadline=None)
def test_encode_always_dyck(v):
    assert is_dyck(encode(BitString.from_int(v, 16)).bits)


def test_separate_pool_reference_example():
    p = pool(["110100", "101010"])
    prefixes, suffixes = separate_pool(p, 6, 2)
    assert prefixes == prefix_multiset("110100").union(prefix_multiset("101010"))
    assert suffixes == suffix_multiset("110100").union(suffix_multiset("101010"))
    assert prefixes.total == 12


def test_separate_pool_single_dyck_string():
    m = full_multiset("110100")
    prefixes, suffixes = separate_pool(m, 6, 1)
    assert prefixes == prefix_multiset("110100")
    assert suffixes == suffix_multiset("110100")


def test_separate_pool_of_three_codewords(mc3_codebook):
    subset = mc3_codebook.base.strings[:3]
    p = mc3_codebook.pool_of(subset)
    prefixes, _ = separate_pool(p, mc3_codebook.N, 3)
    assert prefixes.total == 3 * mc3_codebook.N
    expected = prefix_multiset(mc3_codebook.codewords[0].bits).union(
        *(prefix_multiset(mc3_codebook.codeword_for(s).bits) for s in subset[1:])
    )
    assert prefixes == expected


def test_separate_pool_count_mismatch():
    with pytest.raises(CountMismatch):
        separate_pool(full_multiset("110100"), 6, 2)


def test_sum_from_prefixes_reference():
    prefixes = prefix_multiset("110100").union(prefix_multiset("101010"))
    total = sum_from_prefixes(prefixes, 6, 2)
    assert str(total) == "211110"


def test_sum_from_prefixes_single_string_is_identity():
    total = sum_from_prefixes(prefix_multiset("110100"), 6, 1)
    assert total.to_bitstring() == BitString("110100")


def test_sum_from_prefixes_three_strings():
    strings = ["110100", "101010", "110010"]
    prefixes = prefix_multiset(strings[0]).union(*map(prefix_multiset, strings[1:]))
    total = sum_from_prefixes(prefixes, 6, 3)
    expected = tuple(sum(int(s[i]) for s in strings) for i in range(6))
    assert total.as_tuple() == expected


def test_sum_from_prefixes_rejects_corrupt_pools():
    prefixes = prefix_multiset("110100").remove(
        next(iter(prefix_multiset("110100").elements()))
    )
    with pytest.raises(CountMismatch):
        sum_from_prefixes(prefixes, 6, 1)
    # a mass-reduced length-3 fragment drives the increment negative
    corrupted = CompositionMultiset.parse("{1, 1^2, 0^3, 01^3, 0^21^3, 0^31^3}")
    with pytest.raises(NegativeIncrement):
        sum_from_prefixes(corrupted, 6, 1)


def test_decode_mixture_round_trip_all_pairs(mc_codebook):
    base = mc_codebook.base
    for k in (1, 2):
        for subset in itertools.combinations(base.strings, k):
            got = decode_mixture(mc_codebook.pool_of(subset), mc_codebook)
            assert got == frozenset(subset)


def test_decode_mixture_triples(mc3_codebook):
    rng = random.Random(3)
    for _ in range(25):
        subset = tuple(rng.sample(list(mc3_codebook.base.strings), 3))
        got = decode_mixture(mc3_codebook.pool_of(subset), mc3_codebook)
        assert got == frozenset(subset)


def test_decode_mixture_infers_hbar_and_guards(mc_codebook):
    p = mc_codebook.pool_of(mc_codebook.base.strings[:2])
    with pytest.raises(InconsistentPoolSize):
        decode_mixture(p.remove(next(iter(p.elements()))), mc_codebook)
    with pytest.raises(InconsistentPoolSize):
        decode_mixture(p, mc_codebook, hbar=9)


def test_decode_mixture_requires_parity_backing():
    cb = BhCodebook.explicit(["110100", "101010", "110010"], 2)
    book = encode_codebook(cb)
    p = book.pool_of(cb.strings[:2])
    with pytest.raises(UnsupportedCodebook):
        decode_mixture(p, book)


def test_codec_rate_is_reported(mc_codebook):
    from masscodec.bhcode import codebook_rate

    assert len(mc_codebook.codewords) == len(mc_codebook.base)
    rate = codebook_rate((len(mc_codebook), mc_codebook.N))
    assert 0 < rate < 1
