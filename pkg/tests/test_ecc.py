import itertools
import random

import pytest

from masscodec import ecc
from masscodec.bhcode import BhCodebook
from masscodec.channel import Removal, erase, sample_erasure_pattern
from masscodec.codec import encode as plain_encode
from masscodec.core import BitString, is_dyck, pool
from masscodec.errors import (
    CapabilityTooSmall,
    ConfigError,
    DecodeFailure,
    TooManyErasures,
)
from masscodec.linearcode import erasure_code, single_parity


def test_integral_examples():
    assert str(ecc.integral("110100")) == "100111"
    assert str(ecc.integral("000000")) == "000000"
    assert ecc.derivative(ecc.integral("110100")) == BitString("110100")


def test_integral_is_linear_exhaustively():
    for n in (2, 4, 6, 8):
        for a_val, b_val in itertools.combinations(range(2**n), 2):
            a, b = BitString.from_int(a_val, n), BitString.from_int(b_val, n)
            assert ecc.integral(a ^ b) == ecc.integral(a) ^ ecc.integral(b)


def test_integral_symbol_is_prefix_weight_parity():
    rng = random.Random(0)
    for _ in range(20):
        s = BitString.random(12, rng)
        iw = ecc.integral(s)
        for i in range(1, 13):
            assert iw[i - 1] == s.prefix(i).weight() % 2


def test_one_step_t0_is_plain_encoding():
    s = BitString("0111")
    assert ecc.one_step_encode(s, 0).bits == plain_encode(s).bits


def test_one_step_capability_gate():
    from masscodec.linearcode import bundled_code

    with pytest.raises(CapabilityTooSmall):
        # t=3 needs 3*(8+1)=27 erasures; the shipped code absorbs 22
        ecc.one_step_encode(BitString.zeros(16), 3, code=bundled_code("bch_63_16"))
    with pytest.raises(ConfigError):
        ecc.one_step_encode(BitString.zeros(9), 1)  # no shipped code for k=9


def test_two_step_capability_gate():
    with pytest.raises(CapabilityTooSmall):
        ecc.two_step_encode(BitString.zeros(16), 2, code_data=single_parity(16))


def test_integral_capability_gate():
    with pytest.raises(CapabilityTooSmall):
        ecc.integral_encode(BitString.zeros(16), 4, code=single_parity(16))


def test_scheme_codewords_are_dyck(b2_n16_codebook):
    for t in (1, 2):
        for build in (
            ecc.one_step_codebook,
            ecc.two_step_codebook,
            ecc.integral_codebook,
            ecc.one_step_modp_codebook,
        ):
            book = build(b2_n16_codebook, t)
            assert all(is_dyck(cw.bits) for cw in book.codewords)


def test_two_step_length_identity(b2_n16_codebook):
    for t in (1, 2):
        book = ecc.two_step_codebook(b2_n16_codebook, t)
        actual, formula = ecc.two_step_length_identity(book)
        assert actual == formula


def test_one_step_length_accounting(b2_n16_codebook):
    import math

    for t in (1, 2):
        book = ecc.one_step_codebook(b2_n16_codebook, t)
        lay = book.layout
        code = book.code_data
        slack = (lay.m - code.n) + 2
        bound = (
            16
            + math.ceil(t / 2) * (lay.root + 1) * math.log2(lay.m + 1)
            + 8.5 * lay.root
            + slack
        )
        assert lay.N <= bound


def _roundtrip(book, decode, hbar, t, trials, seed, placement="adversarial"):
    rng = random.Random(seed)
    sources = list(book.base.strings)
    for trial in range(trials):
        subset = tuple(sorted(rng.sample(sources, hbar)))
        words = [book.bits_for(s) for s in subset]
        clean = pool(words)
        pat = sample_erasure_pattern(words, t, rng, placement)
        erased = erase(clean, pat, rng=rng)
        got = decode(erased, book, hbar)
        assert got == frozenset(subset), (trial, subset)


@pytest.mark.parametrize("t", [1, 2])
def test_one_step_roundtrip(b2_n16_codebook, t):
    book = ecc.one_step_codebook(b2_n16_codebook, t)
    clean = book.pool_of(b2_n16_codebook.strings[:2])
    assert ecc.one_step_decode(clean, book, 2) == frozenset(
        b2_n16_codebook.strings[:2]
    )
    _roundtrip(book, ecc.one_step_decode, 2, t, 15, seed=t)
    _roundtrip(book, ecc.one_step_decode, 1, t, 10, seed=t + 10)


@pytest.mark.parametrize("t", [1, 2])
def test_two_step_roundtrip(b2_n16_codebook, t):
    book = ecc.two_step_codebook(b2_n16_codebook, t)
    _roundtrip(book, ecc.two_step_decode, 2, t, 15, seed=t)


@pytest.mark.parametrize("t", [1, 2])
def test_integral_roundtrip(b2_n16_codebook, t):
    book = ecc.integral_codebook(b2_n16_codebook, t)
    assert book.code_data.erasure_capability == t // 2  # the factor-two saving
    _roundtrip(book, ecc.integral_decode, 2, t, 15, seed=t)
    _roundtrip(book, ecc.integral_decode, 1, t, 10, seed=t + 10)


@pytest.mark.parametrize("t", [1, 2])
def test_modp_roundtrip(b2_n16_codebook, t):
    book = ecc.one_step_modp_codebook(b2_n16_codebook, t)
    _roundtrip(book, ecc.one_step_modp_decode, 2, t, 15, seed=t)


def test_two_step_flag_segment_erasures_recover(b2_n16_codebook):
    # wipe fragments whose sum positions sit inside the z segment only
    book = ecc.two_step_codebook(b2_n16_codebook, 1)
    lay = book.layout
    subset = b2_n16_codebook.strings[2:4]
    words = [book.bits_for(s) for s in subset]
    clean = pool(words)
    pos = lay.z_start + 1  # 1-based position of the first z bit
    ones = words[0].prefix(pos).weight()
    erased = erase(clean, [Removal("prefix", pos, ones=ones)])
    got = ecc.two_step_decode(erased, book, 2)
    assert got == frozenset(subset)


def test_two_step_boundary_overload_is_flagged(b2_n16_codebook):
    # t+1 aligned removals put two erasures into the flag code (capability 1)
    book = ecc.two_step_codebook(b2_n16_codebook, 1)
    lay = book.layout
    subset = b2_n16_codebook.strings[:2]
    words = [book.bits_for(s) for s in subset]
    clean = pool(words)
    a = lay.r_start + 1  # sum positions a, a+1 both inside the flag segment
    pre_ones = words[0].prefix(a).weight()
    suf_ones = words[0].suffix(lay.N - a).weight()
    erased = erase(
        clean,
        [Removal("prefix", a, ones=pre_ones), Removal("suffix", lay.N - a, ones=suf_ones)],
    )
    with pytest.raises((TooManyErasures, DecodeFailure)):
        ecc.two_step_decode(erased, book, 2)


def test_two_step_substitution_mode(b2_n16_codebook):
    from masscodec.channel import substitute_mass_reducing

    book = ecc.two_step_codebook(b2_n16_codebook, 1, substitutions=True)
    assert book.code_data.d >= 5 and book.code_flag.d >= 5
    rng = random.Random(7)
    hits = 0
    for _ in range(12):
        subset = tuple(sorted(rng.sample(list(b2_n16_codebook.strings), 2)))
        words = [book.bits_for(s) for s in subset]
        clean = pool(words)
        i = rng.randrange(2, book.N // 2)
        w = words[0].prefix(i).weight()
        if w == 0:
            continue
        corrupted = substitute_mass_reducing(clean, "prefix", i, w - 1, ones=w)
        assert ecc.two_step_decode(corrupted, book, 2, substitutions=True) == frozenset(
            subset
        )
        hits += 1
    assert hits >= 8


def test_integral_survives_payload_start_erasure(b2_n16_codebook):
    # losing the fragment lengths around the first payload symbol couples the
    # redundancy chain anchor; the affine solve must still close the system
    book = ecc.integral_codebook(b2_n16_codebook, 2)
    lay = book.layout
    subset = b2_n16_codebook.strings[5:7]
    words = [book.bits_for(s) for s in subset]
    clean = pool(words)
    a = lay.lead + 1  # first payload position
    erased = erase(
        clean,
        [
            Removal("prefix", a, ones=words[0].prefix(a).weight()),
            Removal("suffix", lay.N - a, ones=words[0].suffix(lay.N - a).weight()),
        ],
    )
    assert ecc.integral_decode(erased, book, 2) == frozenset(subset)


def test_scheme_front_door(b2_n16_codebook):
    book = ecc.scheme_codebook("integral", b2_n16_codebook, 2)
    clean = book.pool_of(b2_n16_codebook.strings[:1])
    assert ecc.scheme_decode(clean, book, 1) == frozenset(
        b2_n16_codebook.strings[:1]
    )
    with pytest.raises(ConfigError):
        ecc.scheme_codebook("nope", b2_n16_codebook, 1)
