"""Generate the parity-check tables bundled under src/masscodec/data/.

Builds classical narrow-sense BCH parity-check matrices over GF(2^m),
row-reduces them to full rank, verifies the exact minimum distance by
enumerating all codewords, and writes:

  hamming_7_4.pcm   3x7,  d=3   (order-1 codebook source)
  bch_15_7.pcm      8x15, d=5   (order-2 codebook source)
  bch_15_5.pcm     10x15, d=7   (order-3 codebook source)
  bch_63_16.json   47x63, d=23  (erasure-protection code, standard form)

Run from the repository root:  python scripts/gen_code_tables.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parent.parent / "src" / "masscodec" / "data"

# x^4+x+1, x^5+x^2+1, x^6+x+1, x^8+x^4+x^3+x^2+1
PRIMITIVE = {4: 0b10011, 5: 0b100101, 6: 0b1000011, 8: 0b100011101}


class GF2m:
    def __init__(self, m: int):
        self.m = m
        self.size = 1 << m
        self.poly = PRIMITIVE[m]

    def mul(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & self.size:
                a ^= self.poly
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        e %= self.size - 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r


def minimal_poly(field: GF2m, beta: int) -> int:
    """Minimal polynomial of beta over GF(2), as a coefficient bitmask."""
    orbit = []
    e = beta
    while e not in orbit:
        orbit.append(e)
        e = field.mul(e, e)
    poly = [1]  # coefficients in GF(2^m), low degree first
    for root in orbit:
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] ^= c
            nxt[i] ^= field.mul(c, root)
        poly = nxt
    assert all(c in (0, 1) for c in poly), "minimal polynomial not binary"
    mask = 0
    for i, c in enumerate(poly):
        mask |= c << i
    return mask


def poly_mul(a: int, b: int) -> int:
    r = 0
    i = 0
    while b >> i:
        if (b >> i) & 1:
            r ^= a << i
        i += 1
    return r


def bch_generator(m: int, delta: int) -> int:
    """Generator polynomial of the narrow-sense BCH code with designed distance delta."""
    field = GF2m(m)
    alpha = 2
    g = 1
    seen = set()
    for i in range(1, delta):
        mp = minimal_poly(field, field.pow(alpha, i))
        if mp not in seen:
            seen.add(mp)
            g = poly_mul(g, mp)
    return g


def rref_gf2(mat: np.ndarray) -> np.ndarray:
    """Row-reduce over GF(2); returns the nonzero rows."""
    a = mat.copy() % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, c]), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return a[:r]


def cyclic_code_matrices(n: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Systematic (G, H) of the cyclic code of length n generated by g."""
    deg = g.bit_length() - 1
    k = n - deg
    G = np.zeros((k, n), dtype=np.uint8)
    for i in range(k):
        for j in range(deg + 1):
            G[i, i + j] = (g >> j) & 1
    G = rref_gf2(G)
    assert G.shape == (k, n)
    assert np.array_equal(G[:, :k], np.eye(k, dtype=np.uint8)), "not systematic"
    A = G[:, k:]
    H = np.concatenate([A.T, np.eye(n - k, dtype=np.uint8)], axis=1)
    assert not (G @ H.T % 2).any()
    return G, H


def exact_min_distance(G: np.ndarray) -> int:
    k = G.shape[0]
    best = G.shape[1]
    block = 1 << 14
    msgs = np.arange(1, 1 << k, dtype=np.uint64)
    for start in range(0, len(msgs), block):
        chunk = msgs[start : start + block]
        bits = ((chunk[:, None] >> np.arange(k, dtype=np.uint64)) & 1).astype(np.uint8)
        words = bits @ G % 2
        best = min(best, int(words.sum(axis=1).min()))
    return best


def alpha_power_pcm(m: int, n: int, powers: list[int]) -> np.ndarray:
    """Rows: binary expansions of alpha^(p*i) for each p, stacked; then RREF."""
    field = GF2m(m)
    rows = []
    for p in powers:
        for bit in range(m):
            rows.append([(field.pow(2, p * i) >> bit) & 1 for i in range(n)])
    return rref_gf2(np.array(rows, dtype=np.uint8))


def write_pcm(name: str, H: np.ndarray, d: int) -> None:
    lines = [f"d={d}"]
    lines += ["".join(str(int(b)) for b in row) for row in H]
    (DATA / f"{name}.pcm").write_text("\n".join(lines) + "\n")
    print(f"{name}.pcm: {H.shape[0]}x{H.shape[1]}, d={d}")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    # Hamming (7,4): all nonzero columns of F_2^3.
    Hh = np.array(
        [[(c >> b) & 1 for c in range(1, 8)] for b in range(2, -1, -1)], dtype=np.uint8
    )
    Gh, _ = None, None
    # verify d via the dual construction: code {x: Hx=0}
    Hrr = rref_gf2(Hh)
    Gh = nullspace_generator(Hrr)
    d = exact_min_distance(Gh)
    assert d == 3
    write_pcm("hamming_7_4", Hh, d)

    for name, m, n, delta, powers in (
        ("bch_15_7", 4, 15, 5, [1, 3]),
        ("bch_15_5", 4, 15, 7, [1, 3, 5]),
        # 20 columns of the 16-row distance-5 matrix over GF(256): a compact
        # order-2 codebook source with strings of length 16
        ("bch_255_cols20", 8, 20, 5, [1, 3]),
    ):
        H = alpha_power_pcm(m, n, powers)
        G = nullspace_generator(H)
        d = exact_min_distance(G)
        assert d >= delta, (name, d)
        write_pcm(name, H, d)

    # Erasure/substitution-protection workhorses, stored in standard form.
    for name, m, n, delta in (("bch_63_16", 6, 63, 23), ("bch_31_21", 5, 31, 5)):
        g = bch_generator(m, delta)
        G, H = cyclic_code_matrices(n, g)
        d = exact_min_distance(G)
        assert d >= delta, (name, d)
        obj = {
            "name": name,
            "n": n,
            "k": int(G.shape[0]),
            "d": int(d),
            "H": ["".join(str(int(b)) for b in row) for row in H],
        }
        (DATA / f"{name}.json").write_text(json.dumps(obj, indent=1) + "\n")
        print(f"{name}.json: ({n},{G.shape[0]},{d})")


def nullspace_generator(H: np.ndarray) -> np.ndarray:
    """Generator matrix of {x : Hx = 0} from a full-rank H (any form)."""
    r, n = H.shape
    a = rref_gf2(H)
    pivots = []
    for row in a:
        pivots.append(int(np.argmax(row)))
    free = [c for c in range(n) if c not in pivots]
    G = np.zeros((len(free), n), dtype=np.uint8)
    for gi, fc in enumerate(free):
        G[gi, fc] = 1
        for ri, pc in enumerate(pivots):
            G[gi, pc] = a[ri, fc]
    assert not (a @ G.T % 2).any()
    return G


if __name__ == "__main__":
    main()
