"""Block balancing and the Dyck mixture codec.

Encoding turns a codebook string s of length n into a longer string whose
prefix fragments always carry at least as many 1s as 0s (and suffixes the
reverse), so that a pooled readout of several codewords can be split into
its prefix half and suffix half by weight alone.  The pipeline:

1.  Left-pad s with zeros to the next perfect square m, and parse it into
    sqrt(m) blocks of sqrt(m) symbols.
2.  Rebuild the string block by block: whenever the running digital sum
    so far and the next block's digital sum have the same sign, append the
    block complemented, otherwise append it unchanged (a block-level
    variant of Knuth balancing).  The flag string r records which blocks
    were complemented; the result u has every prefix RDS within
    (3/2)sqrt(m) of zero and block-boundary RDS within sqrt(m).
3.  Emit  1^ceil((5/2)sqrt(m)) . r . u . 1^a . 0^b  with the tail run
    lengths chosen to make the string balanced of even length
    N = m + ceil((17/2)sqrt(m)), rounded up to even.  The leading run
    keeps the RDS strictly positive throughout the data segments, and the
    whole codeword satisfies the Dyck prefix-weight property.

Decoding a pooled readout of hbar <= h codewords inverts each step: split
the pool by weight, rebuild the coordinate-wise integer sum of the
codewords from the prefix side, reduce the flag and data segments mod 2,
undo the recorded block complementations (which turns the mod-2 segment
sums into the mod-2 sum of the original strings), and look the mod-2 sum
up in the codebook.  The lookup is well defined for parity-check-backed
codebooks, where distinct subsets of size <= h always have distinct mod-2
sums; explicit codebooks may not separate under mod 2 and are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .bhcode import DEFAULT_BUDGET, BhCodebook, invert_mod2_sum
from .core import (
    BitString,
    BitsLike,
    Composition,
    CompositionMultiset,
    PartialSumString,
)
from .errors import (
    CountMismatch,
    DecodeFailure,
    InconsistentPoolSize,
    NegativeIncrement,
    UnsupportedCodebook,
)


def next_square(n: int) -> tuple[int, int]:
    """Smallest perfect square >= n and its root."""
    root = math.isqrt(n)
    if root * root < n:
        root += 1
    return root * root, root


def pad_to_square(s: BitString) -> tuple[BitString, int]:
    """Left-pad with zeros up to the next perfect square length."""
    m, _ = next_square(len(s))
    pad = m - len(s)
    if pad:
        s = BitString.zeros(pad) + s
    return s, pad


@dataclass(frozen=True)
class BalancedPair:
    """An approximately balanced string u and its block-complement flags r."""

    u: BitString
    r: BitString

    def __post_init__(self):
        if len(self.r) ** 2 != len(self.u):
            raise ValueError("flag length squared must equal the data length")


def block_balance(s: BitsLike) -> BalancedPair:
    """Rebuild s block by block so the running digital sum stays near zero.

    The first block is kept; each later block is complemented exactly when
    its digital sum has the same sign (zero counts as positive) as the
    digital sum accumulated so far.
    """
    s = BitString(s)
    m = len(s)
    root = math.isqrt(m)
    if root * root != m:
        raise ValueError(f"length {m} is not a perfect square; pad first")
    blocks = s.blocks(root)
    out = [blocks[0]]
    flags = [0]
    acc = blocks[0].rds()
    for blk in blocks[1:]:
        flip = (acc >= 0) == (blk.rds() >= 0)
        chosen = blk.complement() if flip else blk
        out.append(chosen)
        flags.append(1 if flip else 0)
        acc += chosen.rds()
    u = out[0]
    for blk in out[1:]:
        u = u + blk
    return BalancedPair(u=u, r=BitString(flags))


def unbalance(u: BitsLike, r: BitsLike) -> BitString:
    """Undo block complementation: flip block j exactly when r_j = 1.

    Exact inverse of block_balance on a single string.  Applied to mod-2
    reductions of pooled sums it yields the mod-2 sum of the sources,
    because complementing a block is an XOR with the all-ones block.
    """
    u, r = BitString(u), BitString(r)
    if len(r) ** 2 != len(u):
        raise ValueError("flag length squared must equal the data length")
    root = len(r)
    out = []
    for j, blk in enumerate(u.blocks(root)):
        out.extend((blk.complement() if r[j] else blk).bits)
    return BitString(out)


@dataclass(frozen=True)
class McLayout:
    """Segment table of a codeword: offsets are fixed by (n, z_len) alone."""

    n: int  # source string length before padding
    m: int  # padded length (perfect square)
    root: int  # sqrt(m)
    pad: int
    lead: int  # length of the leading 1-run
    z_len: int  # auxiliary balanced segment between r and u (0 when unused)
    N: int  # total codeword length

    @property
    def r_start(self) -> int:
        return self.lead

    @property
    def z_start(self) -> int:
        return self.lead + self.root

    @property
    def u_start(self) -> int:
        return self.z_start + self.z_len

    @property
    def tail_start(self) -> int:
        return self.u_start + self.m

    @property
    def v_len(self) -> int:
        """Length of the structured head (everything before the tail runs)."""
        return self.tail_start

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "root": self.root,
            "pad": self.pad,
            "lead": self.lead,
            "z_len": self.z_len,
            "N": self.N,
            "segments": {
                "r": [self.r_start, self.root],
                "z": [self.z_start, self.z_len],
                "u": [self.u_start, self.m],
                "tail": [self.tail_start, self.N - self.tail_start],
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "McLayout":
        return cls(
            n=obj["n"],
            m=obj["m"],
            root=obj["root"],
            pad=obj["pad"],
            lead=obj["lead"],
            z_len=obj["z_len"],
            N=obj["N"],
        )


def plain_layout(n: int) -> McLayout:
    m, root = next_square(n)
    lead = math.ceil(5 * root / 2)
    N = m + math.ceil(17 * root / 2)
    if N % 2:
        N += 1
    return McLayout(n=n, m=m, root=root, pad=m - n, lead=lead, z_len=0, N=N)


@dataclass(frozen=True)
class McCodeword:
    """A Dyck codeword together with its segment table and source string."""

    bits: BitString
    layout: McLayout
    origin: BitString
    h: Optional[int] = None


def assemble_codeword(
    layout: McLayout,
    r: BitString,
    u: BitString,
    z: Optional[BitString] = None,
) -> BitString:
    """1-run, flags, optional auxiliary segment, data, then balancing tails."""
    parts = [BitString.ones(layout.lead), r]
    if layout.z_len:
        assert z is not None and len(z) == layout.z_len
        parts.append(z)
    parts.append(u)
    v = parts[0]
    for p in parts[1:]:
        v = v + p
    w = v.weight()
    ones_tail = layout.N // 2 - w
    zeros_tail = layout.N // 2 - (len(v) - w)
    if ones_tail < 0 or zeros_tail < 0:
        raise ValueError("balancing tails would be negative; layout broken")
    bits = v
    if ones_tail:
        bits = bits + BitString.ones(ones_tail)
    if zeros_tail:
        bits = bits + BitString.zeros(zeros_tail)
    return bits


def encode(s: BitsLike, h: Optional[int] = None) -> McCodeword:
    """Balance s and frame it as a Dyck codeword (layout independent of h)."""
    s = BitString(s)
    layout = plain_layout(len(s))
    padded, _ = pad_to_square(s)
    pair = block_balance(padded)
    bits = assemble_codeword(layout, pair.r, pair.u)
    return McCodeword(bits=bits, layout=layout, origin=s, h=h)


@dataclass(frozen=True)
class McCodebook:
    """All codewords of a source codebook under a shared layout."""

    base: BhCodebook
    codewords: tuple[McCodeword, ...]
    layout: McLayout

    @property
    def N(self) -> int:
        return self.layout.N

    @property
    def h(self) -> int:
        return self.base.h

    def __len__(self) -> int:
        return len(self.codewords)

    def codeword_for(self, source: BitString) -> McCodeword:
        for cw in self.codewords:
            if cw.origin == source:
                return cw
        raise KeyError(f"{source} is not in the codebook")

    def pool_of(self, sources) -> CompositionMultiset:
        """Pooled readout of the codewords of the given source strings."""
        from .core import pool as make_pool

        return make_pool([self.codeword_for(BitString(s)).bits for s in sources])


def encode_codebook(base: BhCodebook) -> McCodebook:
    codewords = tuple(encode(s, base.h) for s in base.strings)
    return McCodebook(base=base, codewords=codewords, layout=codewords[0].layout)


def separate_pool(
    pool: CompositionMultiset, N: int, hbar: int
) -> tuple[CompositionMultiset, CompositionMultiset]:
    """Split a complete pooled readout into prefix and suffix multisets.

    Fragments of length i with more than i/2 ones must be prefixes and
    with fewer must be suffixes; at even i a fragment with exactly i/2
    ones can sit on either side, and since all such ties are the identical
    composition the split is unique once each side is filled to hbar.
    """
    prefixes: dict[Composition, int] = {}
    suffixes: dict[Composition, int] = {}
    for length in range(1, N + 1):
        ones_list = pool.ones_at_length(length)
        if len(ones_list) != 2 * hbar:
            raise CountMismatch(
                f"length {length}: {len(ones_list)} fragments, expected {2 * hbar}"
            )
        pref = [o for o in ones_list if 2 * o > length]
        suff = [o for o in ones_list if 2 * o < length]
        ties = len(ones_list) - len(pref) - len(suff)
        to_prefix = hbar - len(pref)
        if to_prefix < 0 or len(suff) > hbar or to_prefix > ties:
            raise CountMismatch(f"length {length}: cannot split {ones_list} into {hbar}+{hbar}")
        for o in pref + [length // 2] * to_prefix:
            c = Composition(length - o, o)
            prefixes[c] = prefixes.get(c, 0) + 1
        for o in suff + [length // 2] * (ties - to_prefix):
            c = Composition(length - o, o)
            suffixes[c] = suffixes.get(c, 0) + 1
    return CompositionMultiset(prefixes), CompositionMultiset(suffixes)


def sum_from_prefixes(
    prefix_pool: CompositionMultiset, N: int, hbar: int
) -> PartialSumString:
    """Coordinate-wise integer sum of the mixture from a complete prefix pool.

    With n_i the total ones over the hbar length-i fragments, position i of
    the sum is n_i - n_{i-1}.
    """
    symbols = []
    prev = 0
    for length in range(1, N + 1):
        ones_list = prefix_pool.ones_at_length(length)
        if len(ones_list) != hbar:
            raise CountMismatch(
                f"length {length}: {len(ones_list)} prefixes, expected {hbar}"
            )
        n_i = sum(ones_list)
        t_i = n_i - prev
        if not 0 <= t_i <= hbar:
            raise NegativeIncrement(f"sum symbol {t_i} at position {length}")
        symbols.append(t_i)
        prev = n_i
    return PartialSumString(symbols, hbar)


def mixture_mod2_target(
    total: PartialSumString, layout: McLayout
) -> BitString:
    """Reduce a complete codeword sum to the mod-2 sum of the source strings."""
    syms = total.as_tuple()
    hbar = total.hbar
    if any(v != hbar for v in syms[: layout.lead]):
        raise DecodeFailure("leading-run sums are not all hbar; pool inconsistent")
    r2 = BitString(tuple(v % 2 for v in syms[layout.r_start : layout.r_start + layout.root]))
    u2 = BitString(tuple(v % 2 for v in syms[layout.u_start : layout.u_start + layout.m]))
    mixed = unbalance(u2, r2)
    if layout.pad:
        mixed = mixed.suffix(layout.m - layout.pad)
    return mixed


def decode_mixture(
    pool: CompositionMultiset,
    codebook: McCodebook,
    hbar: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> frozenset[BitString]:
    """Recover the source strings of a clean pooled readout.

    hbar defaults to |pool| / (2N) for complete pools; pass it explicitly
    when fragments have been removed upstream.
    """
    N = codebook.N
    if hbar is None:
        if pool.total == 0 or pool.total % (2 * N):
            raise InconsistentPoolSize(
                f"pool of {pool.total} fragments is not a multiple of 2N={2 * N}"
            )
        hbar = pool.total // (2 * N)
    if not 1 <= hbar <= codebook.h:
        raise InconsistentPoolSize(f"hbar={hbar} outside 1..{codebook.h}")
    if not codebook.base.parity_check_backed:
        raise UnsupportedCodebook(
            "mixture decoding reduces to a mod-2 lookup; the codebook must be "
            "built from a parity-check matrix for that lookup to be well defined"
        )
    prefixes, _ = separate_pool(pool, N, hbar)
    total = sum_from_prefixes(prefixes, N, hbar)
    target = mixture_mod2_target(total, codebook.layout)
    sources = invert_mod2_sum(codebook.base, target, hbar, budget)
    return frozenset(sources)


@dataclass(frozen=True)
class BalanceReport:
    """Measured balancing statistics of one codeword (for invariant checks)."""

    root: int
    boundary_rds_max: int  # max |RDS| at block boundaries of u
    u_rds_max: int  # max |RDS| anywhere in u
    v_rds_min: int  # min RDS over the structured head
    v_rds_max: int  # max RDS over the structured head
    dyck: bool


def balance_report(s: BitsLike) -> BalanceReport:
    from .core import is_dyck

    cw = encode(s)
    lay = cw.layout
    padded, _ = pad_to_square(BitString(s))
    pair = block_balance(padded)
    profile = pair.u.rds_profile()
    boundary = max(
        abs(profile[j * lay.root - 1]) for j in range(1, lay.root + 1)
    )
    head = cw.bits.prefix(lay.v_len)
    head_profile = head.rds_profile()
    return BalanceReport(
        root=lay.root,
        boundary_rds_max=boundary,
        u_rds_max=max(abs(v) for v in profile),
        v_rds_min=min(head_profile),
        v_rds_max=max(head_profile),
        dyck=is_dyck(cw.bits),
    )
