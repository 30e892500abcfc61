"""Readout error models: missing fragments and mass-reducing substitutions.

A missing fragment of length i removes one composition from the pool; on
the affected side the mixture-sum symbols i and i+1 both become unknown,
so j consecutive missing lengths erase a contiguous burst of j+1 sum
symbols.  Prefix and suffix fragments describe the same sum string from
opposite ends, which gives a free layer of protection: a position is lost
only where erasure bursts from the two sides overlap, and a single lost
position can still be pinned through the known total weight.

A mass-reducing substitution instead reports a fragment lighter than it
was.  Counts per length stay intact when the corrupted fragment stays on
its side of the weight split and shift across sides when it does not;
either way the corruption shows up as out-of-range sum increments, as
per-length count surpluses/deficits, or as prefix/suffix fragments whose
weights cannot be complementary.  Detection is always possible, pinning
the correction is not, and the report below keeps those outcomes apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from . import oracle
from .bhcode import BhCodebook, DEFAULT_BUDGET, invert_sum
from .core import (
    BitString,
    Composition,
    CompositionMultiset,
    PartialSumString,
)
from .errors import (
    Conflict,
    NegativeIncrement,
    NotMassReducing,
    PatternNotPresent,
    SearchSpaceTooLarge,
)

PREFIX = "prefix"
SUFFIX = "suffix"


# ---------------------------------------------------------------------------
# corruption patterns


@dataclass(frozen=True)
class Removal:
    side: str
    length: int
    count: int = 1
    ones: Optional[int] = None  # pin the victim when lengths mix compositions

    def __post_init__(self):
        if self.side not in (PREFIX, SUFFIX):
            raise ValueError(f"side must be prefix/suffix, got {self.side!r}")
        if self.length < 1 or self.count < 1:
            raise ValueError("length and count must be positive")


@dataclass(frozen=True)
class Substitution:
    side: str
    length: int
    ones_from: Optional[int]
    ones_to: int

    def __post_init__(self):
        if self.side not in (PREFIX, SUFFIX):
            raise ValueError(f"side must be prefix/suffix, got {self.side!r}")


@dataclass(frozen=True)
class ErasurePattern:
    removals: tuple[Removal, ...]

    @property
    def total(self) -> int:
        return sum(r.count for r in self.removals)

    def count_on(self, side: str) -> int:
        return sum(r.count for r in self.removals if r.side == side)

    def to_json_obj(self) -> dict:
        out = []
        for r in self.removals:
            entry = {"side": r.side, "len": r.length, "count": r.count}
            if r.ones is not None:
                entry["ones"] = r.ones
            out.append(entry)
        return {"erase": out}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ErasurePattern":
        return cls(
            tuple(
                Removal(e["side"], e["len"], e.get("count", 1), e.get("ones"))
                for e in obj.get("erase", [])
            )
        )


def _side_eligible(side: str, length: int, ones: int) -> bool:
    # prefixes of Dyck codewords carry at least ceil(i/2) ones, suffixes at
    # most floor(i/2); ties at even lengths are eligible for both sides
    if side == PREFIX:
        return 2 * ones >= length
    return 2 * ones <= length


def _resolve_victim(
    pool: CompositionMultiset,
    side: str,
    length: int,
    ones: Optional[int],
    rng=None,
) -> Composition:
    if ones is not None:
        comp = Composition(length - ones, ones)
        if comp not in pool:
            raise PatternNotPresent(f"no fragment {comp} of length {length} in pool")
        if not _side_eligible(side, length, ones):
            raise PatternNotPresent(f"{comp} cannot be a {side} fragment")
        return comp
    eligible = [
        o for o in pool.ones_at_length(length) if _side_eligible(side, length, o)
    ]
    if not eligible:
        raise PatternNotPresent(f"no {side}-eligible fragment of length {length}")
    if len(set(eligible)) == 1:
        return Composition(length - eligible[0], eligible[0])
    if rng is None:
        raise PatternNotPresent(
            f"{side} fragments of length {length} are mixed "
            f"({sorted(set(eligible))} ones); pin the victim or pass an rng"
        )
    o = rng.choice(eligible)
    return Composition(length - o, o)


def erase(
    pool: CompositionMultiset,
    pattern: Union[ErasurePattern, Iterable[Removal]],
    rng=None,
) -> CompositionMultiset:
    """Remove the fragments named by the pattern from the pool."""
    removals = pattern.removals if isinstance(pattern, ErasurePattern) else tuple(pattern)
    out = pool
    for r in removals:
        for _ in range(r.count):
            victim = _resolve_victim(out, r.side, r.length, r.ones, rng)
            try:
                out = out.remove(victim)
            except KeyError as exc:
                raise PatternNotPresent(str(exc)) from exc
    return out


def substitute_mass_reducing(
    pool: CompositionMultiset,
    side: str,
    length: int,
    new_ones: int,
    ones: Optional[int] = None,
    rng=None,
) -> CompositionMultiset:
    """Replace one fragment by a strictly lighter one of the same length."""
    victim = _resolve_victim(pool, side, length, ones, rng)
    if new_ones >= victim.ones:
        raise NotMassReducing(
            f"{victim} -> {new_ones} ones does not reduce the mass"
        )
    if new_ones < 0:
        raise ValueError("new_ones must be nonnegative")
    return pool.remove(victim).add(Composition(length - new_ones, new_ones))


# ---------------------------------------------------------------------------
# one-sided partial sums


def _side_attribution(
    pool: CompositionMultiset, N: int, hbar: int
) -> dict[int, dict]:
    """Per-length classification of fragments into sides, with tie filling.

    Returns for each length: ones lists ``prefix``/``suffix`` after filling
    ties, the tie count, and whether each side's membership is certain and
    complete (exactly hbar fragments attributable beyond doubt).
    """
    out: dict[int, dict] = {}
    for length in range(1, N + 1):
        ones_list = pool.ones_at_length(length)
        p_only = [o for o in ones_list if 2 * o > length]
        s_only = [o for o in ones_list if 2 * o < length]
        ties = len(ones_list) - len(p_only) - len(s_only)
        # fill ties prefix-first up to hbar; remaining ties go to the suffix
        to_prefix = min(ties, max(0, hbar - len(p_only)))
        tie_ones = length // 2
        prefix = p_only + [tie_ones] * to_prefix
        suffix = s_only + [tie_ones] * (ties - to_prefix)
        # a side is reliably complete when every assignment of ties that
        # respects the hbar cap on the other side yields the same count hbar
        p_min = len(p_only) + max(0, ties - max(0, hbar - len(s_only)))
        p_max = min(hbar, len(p_only) + ties) if len(p_only) <= hbar else len(p_only)
        s_min = len(s_only) + max(0, ties - max(0, hbar - len(p_only)))
        s_max = min(hbar, len(s_only) + ties) if len(s_only) <= hbar else len(s_only)
        out[length] = {
            "prefix": prefix,
            "suffix": suffix,
            "ties": ties,
            "prefix_certain": p_min == p_max == hbar,
            "suffix_certain": s_min == s_max == hbar,
        }
    return out


def _cumulative_ones(
    attribution: dict[int, dict], N: int, side: str
) -> list[Optional[int]]:
    """n_i (total ones at length i) where the side is certainly complete."""
    certain = f"{side}_certain"
    out: list[Optional[int]] = []
    for length in range(1, N + 1):
        info = attribution[length]
        out.append(sum(info[side]) if info[certain] else None)
    return out


def _increments(
    cumulative: Sequence[Optional[int]], hbar: int, strict: bool
) -> list[Optional[int]]:
    symbols: list[Optional[int]] = []
    prev: Optional[int] = 0
    for i, n_i in enumerate(cumulative, start=1):
        if n_i is None or prev is None:
            symbols.append(None)
        else:
            t = n_i - prev
            if strict and not 0 <= t <= hbar:
                raise NegativeIncrement(f"sum symbol {t} at position {i}")
            symbols.append(t)
        prev = n_i
    return symbols


def partial_sum_strings(
    pool: CompositionMultiset, N: int, hbar: int
) -> tuple[PartialSumString, PartialSumString]:
    """Per-side mixture sums with erasures, both in prefix orientation.

    A length whose fragments cannot be attributed completely to a side
    erases that side's cumulative count, and each unknown count erases the
    two adjacent sum symbols it supports.  Out-of-range increments raise
    (pure fragment loss cannot produce them; substitutions can).
    """
    attribution = _side_attribution(pool, N, hbar)
    p_syms = _increments(_cumulative_ones(attribution, N, PREFIX), hbar, strict=True)
    s_syms = _increments(_cumulative_ones(attribution, N, SUFFIX), hbar, strict=True)
    p = PartialSumString(p_syms, hbar)
    s = PartialSumString(s_syms, hbar).reversed_()
    return p, s


def one_sided_sum(
    side_pool: CompositionMultiset, N: int, hbar: int, side: str = PREFIX
) -> PartialSumString:
    """Mixture sum from one side's multiset alone (already attributed).

    For readouts that tag fragments with their end, no weight separation
    is involved: a length with fewer than hbar fragments is simply erased.
    The result is returned in prefix orientation either way.
    """
    cumulative: list[Optional[int]] = []
    for length in range(1, N + 1):
        ones = side_pool.ones_at_length(length)
        cumulative.append(sum(ones) if len(ones) == hbar else None)
    syms = _increments(cumulative, hbar, strict=True)
    pss = PartialSumString(syms, hbar)
    return pss if side == PREFIX else pss.reversed_()


def raw_side_sums(
    pool: CompositionMultiset, N: int, hbar: int
) -> tuple[list[Optional[int]], list[Optional[int]]]:
    """Like partial_sum_strings but keeping out-of-range symbols as read.

    For corrupted pools the raw increments are what carry the corruption
    signal; both lists come back in prefix orientation.
    """
    attribution = _side_attribution(pool, N, hbar)
    p_syms = _increments(_cumulative_ones(attribution, N, PREFIX), hbar, strict=False)
    s_syms = _increments(_cumulative_ones(attribution, N, SUFFIX), hbar, strict=False)
    return p_syms, list(reversed(s_syms))


# ---------------------------------------------------------------------------
# bursts, overlaps, and redundancy-free reconstruction


@dataclass(frozen=True)
class BurstReport:
    prefix_bursts: tuple[tuple[int, int], ...]
    suffix_bursts: tuple[tuple[int, int], ...]
    overlaps: tuple[int, ...]  # intersection length of every overlapping pair

    @property
    def recoverable_by_inspection(self) -> bool:
        """No overlap, or a single overlap of unit length."""
        return not self.overlaps or self.overlaps == (1,)


def burst_report(p: PartialSumString, s: PartialSumString) -> BurstReport:
    """Erasure bursts of the two partial sums and their pairwise overlaps.

    Both arguments are in prefix orientation.  An overlap is a nonempty
    intersection of a prefix-side burst with a suffix-side burst; its
    length is the size of the intersection (a burst containing another
    counts in full).
    """
    pb, sb = p.bursts(), s.bursts()
    overlaps = []
    for ip, jp in pb:
        for isuf, jsuf in sb:
            lo = max(ip, isuf)
            hi = min(ip + jp, isuf + jsuf)
            if hi > lo:
                overlaps.append(hi - lo)
    return BurstReport(pb, sb, tuple(overlaps))


@dataclass(frozen=True)
class Recovered:
    """Successful redundancy-free reconstruction."""

    sum: PartialSumString
    strings: Optional[frozenset[BitString]] = None


@dataclass(frozen=True)
class Ambiguous:
    """The pool is consistent with more than one explanation."""

    partial: PartialSumString
    witnesses: Optional[tuple[frozenset[BitString], ...]] = None


def merge_partials(
    p: PartialSumString,
    s_rev: PartialSumString,
    total_weight: int,
) -> Union[PartialSumString, Ambiguous]:
    """Combine the two sides and settle what the total weight still pins.

    Disagreement at a known position raises Conflict (an erasure cannot
    cause it; a substitution can).  Erasures surviving the merge are
    filled only when the weight equation forces them.
    """
    merged = p.merge(s_rev).fill_from_weight(total_weight)
    if merged.complete:
        return merged
    return Ambiguous(partial=merged)


def reconstruct_redundancy_free(
    pool: CompositionMultiset,
    N: int,
    hbar: int,
    total_weight: Optional[int] = None,
    codebook=None,
    budget: int = DEFAULT_BUDGET,
) -> Union[Recovered, Ambiguous]:
    """Reconstruct a mixture sum from an erased pool without coding redundancy.

    The two-sided merge always succeeds when the erasure bursts of the two
    sides do not overlap, or overlap once in a single position; the weight
    anchor can settle a little more (all-zero and all-max deficits).  On
    ambiguity the consistent codebook subsets are enumerated as witnesses
    (over all Dyck strings when no codebook is given and hbar is 1).

    The codebook may be a plain distinct-sums codebook of Dyck strings
    (sources are found by inverting the integer sum) or an encoded
    mixture codebook (sources come from the balanced mod-2 pipeline).
    """
    if total_weight is None:
        total_weight = hbar * N // 2  # Dyck codewords are balanced
    p, s = partial_sum_strings(pool, N, hbar)
    outcome = merge_partials(p, s, total_weight)
    if isinstance(outcome, PartialSumString):
        strings: Optional[frozenset[BitString]] = None
        if codebook is not None:
            strings = _invert_recovered(outcome, codebook, hbar, budget)
        elif hbar == 1:
            strings = frozenset({outcome.to_bitstring()})
        return Recovered(sum=outcome, strings=strings)
    witnesses = _consistency_witnesses(pool, N, hbar, codebook, budget)
    return Ambiguous(partial=outcome.partial, witnesses=witnesses)


def _invert_recovered(
    total: PartialSumString, codebook, hbar: int, budget: int
) -> frozenset[BitString]:
    from .codec import McCodebook, mixture_mod2_target

    if isinstance(codebook, McCodebook):
        from .bhcode import invert_mod2_sum

        target = mixture_mod2_target(total, codebook.layout)
        return frozenset(invert_mod2_sum(codebook.base, target, hbar, budget))
    return frozenset(invert_sum(codebook, total.as_tuple(), hbar, budget))


def _consistency_witnesses(
    pool: CompositionMultiset,
    N: int,
    hbar: int,
    codebook,
    budget: int,
) -> Optional[tuple[frozenset[BitString], ...]]:
    from .codec import McCodebook

    origin_of = None
    if isinstance(codebook, McCodebook):
        origin_of = {cw.bits: cw.origin for cw in codebook.codewords}
        universe: Sequence[BitString] = tuple(origin_of)
    elif codebook is not None:
        universe = codebook.strings
    elif hbar == 1 and 2**N <= budget:
        from .core import all_dyck_strings

        universe = all_dyck_strings(N)  # the codeword universe of this model
    else:
        return None
    removals = 2 * N * hbar - pool.total
    try:
        hits = oracle.brute_decode(pool, universe, hbar, removals, budget)
    except SearchSpaceTooLarge:
        return None
    if origin_of is not None:
        return tuple(frozenset(origin_of[b] for b in sub) for sub in hits)
    return tuple(frozenset(sub) for sub in hits)


# ---------------------------------------------------------------------------
# substitution detection


@dataclass(frozen=True)
class Correction:
    """Replace one observed fragment with what it must have been."""

    side: str
    length: int
    observed: Composition
    restored: Composition


@dataclass(frozen=True)
class DetectionReport:
    hbar: int
    prefix_count_dev: tuple[tuple[int, int], ...]  # (length, count - hbar)
    suffix_count_dev: tuple[tuple[int, int], ...]
    prefix_bad_increments: tuple[tuple[int, int], ...]  # (position, value)
    suffix_bad_increments: tuple[tuple[int, int], ...]
    incompatible_lengths: tuple[int, ...]
    prefix_sum: Optional[PartialSumString]
    suffix_sum: Optional[PartialSumString]  # prefix orientation
    recovered_sum: Optional[PartialSumString]
    candidate_sums: tuple[PartialSumString, ...]
    corrections: tuple[Correction, ...]

    @property
    def is_clean(self) -> bool:
        return not (
            self.prefix_count_dev
            or self.suffix_count_dev
            or self.prefix_bad_increments
            or self.suffix_bad_increments
            or self.incompatible_lengths
        )

    @property
    def unique_correction(self) -> Optional[Correction]:
        return self.corrections[0] if len(self.corrections) == 1 else None


def apply_correction(
    pool: CompositionMultiset, correction: Correction
) -> CompositionMultiset:
    return pool.remove(correction.observed).add(correction.restored)


def _string_weight(pool: CompositionMultiset, N: int, hbar: int) -> Optional[int]:
    """Common per-string weight, read off the full-length fragments."""
    ones = pool.ones_at_length(N)
    if ones and len(set(ones)) == 1:
        return ones[0]
    return None


def detect_substitution(
    pool: CompositionMultiset, N: int, hbar: int
) -> DetectionReport:
    """Flag count anomalies, out-of-range increments, and incompatibilities.

    Under a single-error assumption a fragment that crossed the weight
    split (count deficit on one side, surplus on the other at one length)
    is reconstructed from the complementary side; every consistent repair
    is listed, and exactly one candidate means the error is correctable.
    """
    attribution = _side_attribution(pool, N, hbar)
    p_dev, s_dev = [], []
    for length in range(1, N + 1):
        info = attribution[length]
        dp = len(info["prefix"]) - hbar
        ds = len(info["suffix"]) - hbar
        if dp:
            p_dev.append((length, dp))
        if ds:
            s_dev.append((length, ds))

    def naive_side(side: str) -> tuple[list, list]:
        cumulative: list[Optional[int]] = []
        for length in range(1, N + 1):
            vals = attribution[length][side]
            cumulative.append(sum(vals) if vals or hbar == 0 else None)
        symbols = _increments(cumulative, hbar, strict=False)
        bad = [
            (i, v)
            for i, v in enumerate(symbols, start=1)
            if v is not None and not 0 <= v <= hbar
        ]
        return symbols, bad

    p_naive, p_bad = naive_side(PREFIX)
    s_naive, s_bad = naive_side(SUFFIX)
    # suffix-side positions and symbols in prefix orientation
    s_naive_rev = list(reversed(s_naive))
    s_bad_rev = [(N - i + 1, v) for i, v in s_bad]

    w0 = _string_weight(pool, N, hbar)
    incompatible = []
    if w0 is not None:
        for length in range(1, N):
            info_p = attribution[length]
            info_s = attribution[N - length]
            if len(info_p["prefix"]) == hbar and len(info_s["suffix"]) == hbar:
                expect = sorted(w0 - o for o in info_s["suffix"])
                if expect != sorted(info_p["prefix"]):
                    incompatible.append(length)

    def clean_sum(symbols: list, devs: list, bad: list) -> Optional[PartialSumString]:
        if devs or bad or any(v is None for v in symbols):
            return None
        return PartialSumString(symbols, hbar)

    prefix_sum = clean_sum(p_naive, p_dev, p_bad)
    suffix_sum = clean_sum(s_naive_rev, s_dev, s_bad_rev)
    candidates = []
    for ps in (prefix_sum, suffix_sum):
        if ps is not None and ps not in candidates:
            candidates.append(ps)
    recovered = None
    if len(candidates) == 1 and not incompatible:
        recovered = candidates[0]

    corrections = _single_error_corrections(
        attribution, N, hbar, w0, p_dev, s_dev
    )
    return DetectionReport(
        hbar=hbar,
        prefix_count_dev=tuple(p_dev),
        suffix_count_dev=tuple(s_dev),
        prefix_bad_increments=tuple(p_bad),
        suffix_bad_increments=tuple(s_bad_rev),
        incompatible_lengths=tuple(incompatible),
        prefix_sum=prefix_sum,
        suffix_sum=suffix_sum,
        recovered_sum=recovered,
        candidate_sums=tuple(candidates),
        corrections=corrections,
    )


def _single_error_corrections(
    attribution: dict,
    N: int,
    hbar: int,
    w0: Optional[int],
    p_dev: list,
    s_dev: list,
) -> tuple[Correction, ...]:
    """Repairs for one fragment that was read lighter and switched sides."""
    if w0 is None:
        return ()
    # exactly one deficit/surplus pair at a common length
    deficits = [(ln, PREFIX) for ln, d in p_dev if d == -1] + [
        (ln, SUFFIX) for ln, d in s_dev if d == -1
    ]
    surpluses = {(ln, PREFIX) for ln, d in p_dev if d == 1} | {
        (ln, SUFFIX) for ln, d in s_dev if d == 1
    }
    if len(p_dev) + len(s_dev) != 2 or len(deficits) != 1:
        return ()
    length, side = deficits[0]
    other = SUFFIX if side == PREFIX else PREFIX
    if (length, other) not in surpluses:
        return ()
    observed_short = list(attribution[length][side])  # hbar - 1 genuine values
    observed_long = list(attribution[length][other])  # hbar + 1 values, one bogus
    comp_len = N - length
    candidates: list[Correction] = []
    if comp_len == length:
        # the complementary fragments live at the same length as the surplus,
        # so each choice of the bogus fragment implies its own repair
        pool_vals = observed_long
        for idx in range(len(pool_vals)):
            bogus = pool_vals[idx]
            rest = pool_vals[:idx] + pool_vals[idx + 1 :]
            expect = sorted(w0 - o for o in rest)
            missing = _multiset_diff(expect, observed_short)
            if missing is None:
                continue
            restored_ones = missing
            if restored_ones <= bogus:
                continue  # not mass reducing
            cand = Correction(
                side=side,
                length=length,
                observed=Composition(length - bogus, bogus),
                restored=Composition(length - restored_ones, restored_ones),
            )
            if cand not in candidates:
                candidates.append(cand)
    else:
        comp_vals = attribution[comp_len][other]
        if len(comp_vals) != hbar:
            return ()
        expect = sorted(w0 - o for o in comp_vals)
        missing = _multiset_diff(expect, observed_short)
        if missing is None:
            return ()
        expect_other = None
        # the bogus fragment is whatever the surplus side holds beyond its
        # own complementary expectation
        own_comp = attribution[N - length][side] if N - length >= 1 else []
        if len(own_comp) == hbar:
            expect_other = sorted(w0 - o for o in own_comp)
        bogus_pool = list(observed_long)
        if expect_other is not None:
            for o in expect_other:
                if o in bogus_pool:
                    bogus_pool.remove(o)
        for bogus in sorted(set(bogus_pool)):
            if missing > bogus:
                cand = Correction(
                    side=side,
                    length=length,
                    observed=Composition(length - bogus, bogus),
                    restored=Composition(length - missing, missing),
                )
                if cand not in candidates:
                    candidates.append(cand)
    return tuple(candidates)


def _multiset_diff(expect: list, observed: list) -> Optional[int]:
    """The single element of ``expect`` not covered by ``observed``."""
    rest = list(expect)
    for o in observed:
        if o in rest:
            rest.remove(o)
        else:
            return None
    if len(rest) != 1:
        return None
    return rest[0]


# ---------------------------------------------------------------------------
# correctable-pattern counting


def count_correctable_single(n: int, t: int) -> int:
    """Patterns of t missing fragments a single string survives unaided.

    Choose i missing prefix lengths, then t-i missing suffix lengths among
    the n-i lengths whose complementary prefix is still present.
    """
    if t < 0 or t > n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    return sum(math.comb(n, i) * math.comb(n - i, t - i) for i in range(t + 1))


def count_correctable_multi(n: int, t: int, h: int) -> int:
    """Missing-fragment patterns a mixture of up to h strings survives.

    Erasures spread over j distinct lengths, each length losing between 1
    and h fragments on one side: sum_j C(n,j) C(t-1,t-j) 2^j, valid for
    t <= h.
    """
    if t < 0 or t > n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    if t > h:
        raise ValueError(f"the count is valid for t <= h, got t={t}, h={h}")
    if t == 0:
        return 1
    return sum(
        math.comb(n, j) * math.comb(t - 1, t - j) * 2**j
        for j in range(t + 1)
        if t - j <= t - 1
    )


# ---------------------------------------------------------------------------
# seeded experiments


def sample_erasure_pattern(
    strings: Sequence[BitString],
    t: int,
    rng,
    placement: str = "uniform",
) -> ErasurePattern:
    """Draw t fragment removals from the true pool of the given strings.

    ``uniform`` removes fragments uniformly at random; ``adversarial``
    pairs prefix and suffix removals at mirrored lengths so their erasure
    bursts collide as often as the pattern size allows.
    """
    n = len(strings[0])
    fragments = []
    for s in strings:
        w = 0
        for i, b in enumerate(s.bits, start=1):
            w += b
            fragments.append((PREFIX, i, w))
        w = 0
        for i, b in enumerate(reversed(s.bits), start=1):
            w += b
            fragments.append((SUFFIX, i, w))
    if placement == "uniform":
        picks = rng.sample(fragments, t)
    elif placement == "adversarial":
        taken: set[int] = set()

        def free_at(side: str, length: int) -> list[int]:
            return [
                i
                for i, f in enumerate(fragments)
                if i not in taken and f[0] == side and f[1] == length
            ]

        lengths = list(range(2, n))
        rng.shuffle(lengths)
        for ln in lengths:
            if len(taken) + 2 > t:
                break
            pre, suf = free_at(PREFIX, ln), free_at(SUFFIX, n - ln)
            if pre and suf:
                taken.add(rng.choice(pre))
                taken.add(rng.choice(suf))
        while len(taken) < t:
            free = [i for i in range(len(fragments)) if i not in taken]
            taken.add(rng.choice(free))
        picks = [fragments[i] for i in sorted(taken)]
    else:
        raise ValueError(f"unknown placement {placement!r}")
    return ErasurePattern(
        tuple(Removal(side, length, 1, ones) for side, length, ones in picks)
    )


def run_erasure_experiment(
    codebook: BhCodebook,
    hbar: int,
    t: int,
    trials: int,
    seed: int,
    placement: str = "uniform",
    budget: int = DEFAULT_BUDGET,
) -> list[dict]:
    """Monte-Carlo erasure trials; one outcome row per trial.

    Codebooks whose strings are not already Dyck are run through the
    mixture encoder first (weight separation is meaningless otherwise).
    Outcomes: ``exact`` (recovered and equal to the truth), ``ambiguous``,
    ``conflict`` (side disagreement), and ``wrong`` (recovered but not the
    truth -- must never happen; kept so silence cannot hide it).
    """
    import random

    from .core import is_dyck, pool as make_pool

    raw = all(len(s) % 2 == 0 and is_dyck(s) for s in codebook.strings)
    if raw:
        decode_book = codebook
        word_of = {s: s for s in codebook.strings}
        N = codebook.n
    else:
        from .codec import encode_codebook

        decode_book = encode_codebook(codebook)
        word_of = {cw.origin: cw.bits for cw in decode_book.codewords}
        N = decode_book.N
    rows = []
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        subset = tuple(sorted(rng.sample(list(codebook.strings), hbar)))
        words = [word_of[s] for s in subset]
        clean = make_pool(words)
        pattern = sample_erasure_pattern(words, t, rng, placement)
        erased = erase(clean, pattern, rng=rng)
        try:
            result = reconstruct_redundancy_free(
                erased, N, hbar, codebook=decode_book, budget=budget
            )
        except Conflict:
            rows.append(_row(seed, trial, N, hbar, t, "conflict"))
            continue
        if isinstance(result, Ambiguous):
            outcome = "ambiguous"
        elif result.strings == frozenset(subset):
            outcome = "exact"
        else:
            outcome = "wrong"
        rows.append(_row(seed, trial, N, hbar, t, outcome))
    return rows


def _row(seed, trial, n, hbar, t, outcome) -> dict:
    return {
        "seed": seed,
        "trial": trial,
        "n": n,
        "hbar": hbar,
        "t": t,
        "outcome": outcome,
    }
