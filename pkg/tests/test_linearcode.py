import itertools
import random

import numpy as np
import pytest

from masscodec.errors import ConfigError, DecodeFailure, TooManyErasures
from masscodec.linearcode import (
    LinearCode,
    bundled_code,
    erasure_code,
    hamming_code,
    modp_code,
    shortened,
    single_parity,
    substitution_code,
    trivial_code,
)


def all_codewords(code):
    for val in range(2**code.k):
        yield code.encode([(val >> j) & 1 for j in range(code.k)])


def test_single_parity_roundtrip():
    code = single_parity(4)
    word = code.encode([1, 0, 1, 1])
    assert word == (1, 0, 1, 1, 1)
    assert code.is_codeword(word)
    assert code.extract_message(word) == (1, 0, 1, 1)


def test_hamming_is_systematic_and_d3():
    code = hamming_code(3)
    assert (code.n, code.k, code.d) == (7, 4, 3)
    assert code.info_positions == (0, 1, 2, 3)
    assert code.exact_min_distance() == 3


def test_shortening_keeps_distance():
    code = shortened(hamming_code(4), 8)
    assert (code.n, code.k) == (12, 8)
    assert code.info_positions == tuple(range(8))
    assert code.exact_min_distance() >= 3


def test_bundled_codes_have_declared_parameters():
    big = bundled_code("bch_63_16")
    assert (big.n, big.k, big.d) == (63, 16, 23)
    assert big.info_positions == tuple(range(16))
    sub = bundled_code("bch_31_21")
    assert (sub.n, sub.k, sub.d) == (31, 21, 5)
    assert sub.exact_min_distance() == 5


def test_erasure_decoding_exhaustive_small():
    code = hamming_code(3)
    rng = random.Random(0)
    for word in itertools.islice(all_codewords(code), 16):
        for erased in itertools.combinations(range(7), 2):
            received = [None if i in erased else b for i, b in enumerate(word)]
            assert code.decode_erasures(received) == word


def test_erasure_decoding_beyond_capability_is_flagged():
    code = single_parity(4)
    word = list(code.encode([1, 1, 0, 0]))
    word[0] = word[1] = None
    with pytest.raises(TooManyErasures):
        code.decode_erasures(word)
    with pytest.raises(DecodeFailure):
        code.decode_erasures([1, 0, 0, 0, 0])  # parity violated, no erasures


def test_error_decoding():
    code = substitution_code(8, 2)
    assert code.d >= 5 and code.k == 8
    rng = random.Random(1)
    for _ in range(20):
        msg = [rng.randrange(2) for _ in range(8)]
        word = list(code.encode(msg))
        for pos in rng.sample(range(code.n), 2):
            word[pos] ^= 1
        assert code.extract_message(code.decode_errors(word)) == tuple(msg)


def test_bch_6316_erasure_capability_at_full_load():
    code = bundled_code("bch_63_16")
    rng = random.Random(2)
    msg = [rng.randrange(2) for _ in range(16)]
    word = list(code.encode(msg))
    for pos in rng.sample(range(63), 22):
        word[pos] = None
    assert code.extract_message(code.decode_erasures(word)) == tuple(msg)


def test_factories_and_json_round_trip():
    assert erasure_code(5, 0).d == 1
    assert erasure_code(5, 1).d == 2
    assert erasure_code(5, 2).d == 3
    assert erasure_code(16, 18).name == "bch_63_16"
    with pytest.raises(ConfigError):
        erasure_code(9, 20)
    code = erasure_code(5, 2)
    again = LinearCode.from_json_obj(code.to_json_obj())
    assert (again.n, again.k, again.d) == (code.n, code.k, code.d)
    assert np.array_equal(again.H, code.H)


def test_trivial_code():
    code = trivial_code(3)
    assert code.encode([1, 0, 1]) == (1, 0, 1)
    assert code.is_codeword([1, 1, 1])


def test_modp_solver():
    pc = modp_code(3, 20)
    rng = random.Random(3)
    vec = [rng.randrange(3) for _ in range(20)]
    syn = pc.syndrome(vec)
    for i, j in itertools.combinations(range(20), 2):
        received = list(vec)
        received[i] = received[j] = None
        assert pc.solve_erasures(received, syn) == tuple(vec)


def test_modp_solver_flags_dependent_erasures():
    pc = modp_code(3, 20)
    # find a linearly dependent column triple; its erasure is unsolvable
    def dependent_mod3(cols):
        for coeffs in itertools.product(range(3), repeat=3):
            if not any(coeffs):
                continue
            combo = sum(c * pc.H[:, j] for c, j in zip(coeffs, cols)) % 3
            if not combo.any():
                return True
        return False

    dependent = next(
        (c for c in itertools.combinations(range(20), 3) if dependent_mod3(c)), None
    )
    assert dependent is not None
    vec = [1] * 20
    syn = pc.syndrome(vec)
    received = list(vec)
    for pos in dependent:
        received[pos] = None
    with pytest.raises(TooManyErasures):
        pc.solve_erasures(received, syn)


def test_modp_with_dropped_syndrome_rows():
    pc = modp_code(3, 20)
    rng = random.Random(4)
    vec = [rng.randrange(3) for _ in range(20)]
    syn = list(pc.syndrome(vec))
    syn[0] = None
    received = list(vec)
    received[2] = None
    assert pc.solve_erasures(received, syn) == tuple(vec)
