import random

import pytest
from hypothesis import given, strategies as st

from masscodec.core import (
    BitString,
    Composition,
    CompositionMultiset,
    PartialSumString,
    all_dyck_strings,
    composition,
    full_multiset,
    is_dyck,
    pool,
    prefix_multiset,
    suffix_multiset,
)
from masscodec.errors import Conflict, DuplicateString, LengthMismatch, OddLength

bits_st = st.text(alphabet="01", min_size=1, max_size=24)


def test_composition_basics():
    assert composition("001") == Composition(2, 1)
    assert composition("1") == Composition(0, 1)
    assert composition("01101") == Composition(2, 3)
    with pytest.raises(ValueError):
        composition("")


def test_composition_text_form():
    assert str(composition("001")) == "0^21"
    assert str(Composition(0, 2)) == "1^2"
    assert str(Composition(1, 1)) == "01"
    assert str(Composition(3, 0)) == "0^3"
    assert Composition.parse("0^2 1^3") == Composition(2, 3)
    assert Composition.parse("01^2") == Composition(1, 2)
    assert Composition.parse("0") == Composition(1, 0)


def test_prefix_suffix_multisets_worked_example():
    s = "01101"
    assert prefix_multiset(s) == CompositionMultiset.parse("{0, 01, 01^2, 0^21^2, 0^21^3}")
    assert suffix_multiset(s) == CompositionMultiset.parse("{1, 01, 01^2, 01^3, 0^21^3}")
    merged = prefix_multiset(s).union(suffix_multiset(s))
    assert full_multiset(s) == merged
    assert full_multiset(s).total == 10


def test_small_multisets():
    assert prefix_multiset("1") == CompositionMultiset.parse("{1}")
    assert suffix_multiset("0") == CompositionMultiset.parse("{0}")
    assert prefix_multiset("001") == CompositionMultiset.parse("{0, 0^2, 0^21}")
    assert suffix_multiset("001") == CompositionMultiset.parse("{1, 01, 0^21}")
    assert full_multiset("1") == CompositionMultiset.parse("{1, 1}")
    assert full_multiset("001") == CompositionMultiset.parse("{0, 0^2, 0^21, 1, 01, 0^21}")


def test_pool_worked_example():
    # 24 fragments of the two-string mixture used throughout
    p = pool(["110100", "101010"])
    expected = CompositionMultiset.parse(
        "{1,1, 01, 1^2, 01^2, 01^2, 0^21^2, 01^3, 0^21^3, 0^21^3, 0^31^3, 0^31^3,"
        " 0^31^3, 0^31^3, 0^31^2, 0^31^2, 0^21^2, 0^31, 0^21, 0^21, 01, 0^2, 0, 0}"
    )
    assert p == expected
    assert p.total == 24


def test_pool_errors_and_edge_cases():
    assert pool(["110100"]) == full_multiset("110100")
    assert pool(["110100", "101010", "110010"]).total == 36
    with pytest.raises(DuplicateString):
        pool(["01", "01"])
    with pytest.raises(LengthMismatch):
        pool(["01", "011"])


def test_is_dyck():
    assert is_dyck("110100")
    assert is_dyck("10")
    assert not is_dyck("01")
    assert all(is_dyck(s) for s in ("110100", "101010", "110010"))
    with pytest.raises(OddLength):
        is_dyck("011")


def test_all_dyck_strings_are_catalan_counted():
    assert len(all_dyck_strings(2)) == 1
    assert len(all_dyck_strings(4)) == 2
    assert len(all_dyck_strings(6)) == 5


def test_multiset_canonical_serialization_round_trip():
    p = pool(["110100", "101010"])
    obj = p.to_json_obj()
    lengths = [e["zeros"] + e["ones"] for e in obj]
    assert lengths == sorted(lengths)
    assert CompositionMultiset.from_json_obj(obj) == p


@given(bits_st)
def test_full_multiset_size_and_per_length_counts(text):
    s = BitString(text)
    m = full_multiset(s)
    assert m.total == 2 * len(s)
    for i in range(1, len(s) + 1):
        assert m.count_at_length(i) == 2


@given(bits_st)
def test_prefix_suffix_complementarity(text):
    s = BitString(text)
    total = composition(s)
    for i in range(1, len(s)):
        pre = composition(s.prefix(i))
        suf = composition(s.suffix(len(s) - i))
        assert pre.zeros + suf.zeros == total.zeros
        assert pre.ones + suf.ones == total.ones


@given(st.lists(st.integers(0, 2**10 - 1), min_size=1, max_size=5, unique=True))
def test_pool_is_order_free(values):
    strings = [BitString.from_int(v, 10) for v in values]
    shuffled = list(strings)
    random.Random(0).shuffle(shuffled)
    assert pool(strings) == pool(shuffled)
    # associativity: pooling in two stages gives the same multiset
    if len(strings) > 1:
        left = full_multiset(strings[0]).union(pool(strings[1:]))
        assert left == pool(strings)


def test_dyck_suffix_weights_are_dominated():
    rng = random.Random(5)
    picks = rng.sample(all_dyck_strings(10), 20)
    for s in picks:
        for i in range(1, len(s) + 1):
            assert s.suffix(i).weight() <= i // 2


def test_rds_matches_definition():
    s = BitString("01101")
    assert s.rds_profile() == (-1, 0, 1, 0, 1)
    assert s.rds() == 2 * s.weight() - len(s)
    assert s.rds(2) == 0


def test_partial_sum_string_parsing_and_bursts():
    p = PartialSumString.parse("21εε10", hbar=2)
    assert str(p) == "21εε10"
    assert p.erased_positions() == (3, 4)
    assert p.bursts() == ((3, 2),)
    assert not p.complete
    assert p.known_weight() == 4


def test_partial_sum_merge_and_conflict():
    a = PartialSumString.parse("21εε10", 2)
    b = PartialSumString.parse("εε1110", 2)
    assert str(a.merge(b)) == "211110"
    with pytest.raises(Conflict):
        PartialSumString.parse("20", 2).merge(PartialSumString.parse("21", 2))


def test_fill_from_weight_rules():
    assert str(PartialSumString.parse("21ε110", 2).fill_from_weight(6)) == "211110"
    assert str(PartialSumString.parse("1εε000", 1).fill_from_weight(3)) == "111000"
    assert str(PartialSumString.parse("1εε100", 1).fill_from_weight(2)) == "100100"
    # 2 left over 2 erased symbols with hbar=2 stays open
    partial = PartialSumString.parse("21εε10", 2).fill_from_weight(6)
    assert not partial.complete
    with pytest.raises(Conflict):
        PartialSumString.parse("21ε110", 2).fill_from_weight(99)


def test_bitstring_xor_and_int_round_trip():
    a, b = BitString("1100"), BitString("1010")
    assert str(a ^ b) == "0110"
    assert BitString.from_int(a.as_int, 4) == a
    with pytest.raises(LengthMismatch):
        a ^ BitString("10")
