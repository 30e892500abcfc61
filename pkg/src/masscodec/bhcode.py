"""Multiset-sum codebooks built from parity-check matrices.

A codebook has the order-h distinct-sums property when any two different
subsets of at most h codestrings have different coordinate-wise sums over
the integers.  Columns of a parity-check matrix of a binary code with
minimum distance >= 2h+1 always qualify: two subsets of size <= h whose
indicator vectors differ in a pattern of weight <= 2h < d must have
different syndromes, hence different sums mod 2, hence different integer
sums.  That mod-2 separation is also exactly what lets a mixture decoder
recover the subset from the mod-2 reduction of the pooled sum.

Small parity-check matrices ship as plain-text data files (one 0/1 row
per line, ``d=<int>`` header); anything with a verified distance can be
loaded the same way.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .core import BitString, mod2_sum, real_sum
from .errors import (
    AmbiguousSolution,
    ConfigError,
    DistanceTooSmall,
    DuplicateString,
    LengthMismatch,
    NoSolution,
    SearchSpaceTooLarge,
)

DEFAULT_BUDGET = 2**22


@dataclass(frozen=True)
class ParityCheckSpec:
    """A binary parity-check matrix with a declared minimum distance."""

    rows: tuple[tuple[int, ...], ...]
    d: int

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ConfigError("empty parity-check matrix")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ConfigError("ragged parity-check matrix")
        if any(b not in (0, 1) for r in self.rows for b in r):
            raise ConfigError("parity-check entries must be 0/1")
        if self.d < 1:
            raise ConfigError("distance must be positive")
        cols = self.columns()
        if any(c.weight() == 0 for c in cols):
            raise ConfigError("parity-check columns must be nonzero")
        if len(set(cols)) != len(cols):
            raise ConfigError("parity-check columns must be pairwise distinct")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def columns(self) -> tuple[BitString, ...]:
        return tuple(
            BitString(tuple(row[j] for row in self.rows))
            for j in range(self.n_cols)
        )

    def to_text(self) -> str:
        lines = [f"d={self.d}"]
        lines.extend("".join(str(b) for b in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ParityCheckSpec":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("d="):
            raise ConfigError("matrix file must start with a 'd=<int>' header")
        try:
            d = int(lines[0][2:])
        except ValueError as exc:
            raise ConfigError(f"bad distance header {lines[0]!r}") from exc
        rows = []
        for ln in lines[1:]:
            if not all(c in "01" for c in ln):
                raise ConfigError(f"bad matrix row {ln!r}")
            rows.append(tuple(int(c) for c in ln))
        return cls(tuple(rows), d)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ParityCheckSpec":
        return cls.from_text(Path(path).read_text())


def bundled_spec(name: str) -> ParityCheckSpec:
    """Load one of the matrices shipped with the package (e.g. ``bch_15_7``)."""
    res = resources.files("masscodec").joinpath("data", f"{name}.pcm")
    try:
        return ParityCheckSpec.from_text(res.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"no bundled matrix named {name!r}") from exc


@dataclass(frozen=True)
class BhCodebook:
    """An ordered set of equal-length strings with distinct subset sums."""

    n: int
    h: int
    strings: tuple[BitString, ...]
    source: Optional[ParityCheckSpec] = None

    def __post_init__(self):
        if any(len(s) != self.n for s in self.strings):
            raise LengthMismatch("codebook strings must all have the declared length")
        if len(set(self.strings)) != len(self.strings):
            raise DuplicateString("codebook strings must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)

    @property
    def parity_check_backed(self) -> bool:
        return self.source is not None

    @classmethod
    def explicit(cls, strings: Iterable, h: int) -> "BhCodebook":
        bs = tuple(BitString(s) for s in strings)
        return cls(n=len(bs[0]), h=h, strings=bs, source=None)


def build_bh_codebook(h: int, spec: ParityCheckSpec) -> BhCodebook:
    """Codebook whose strings are the matrix columns; needs d >= 2h+1."""
    if spec.d < 2 * h + 1:
        raise DistanceTooSmall(
            f"distance {spec.d} < {2 * h + 1} required for multiplicity {h}"
        )
    return BhCodebook(n=spec.n_rows, h=h, strings=spec.columns(), source=spec)


@dataclass(frozen=True)
class VerificationResult:
    valid: bool
    witness: Optional[tuple[tuple[BitString, ...], tuple[BitString, ...], tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.valid


def _subset_budget(size: int, h: int, budget: int) -> int:
    total = sum(math.comb(size, k) for k in range(1, h + 1))
    if total > budget:
        raise SearchSpaceTooLarge(
            f"{total} subsets of size <= {h} exceed the budget {budget}"
        )
    return total


def verify_bh(
    codebook: Union[BhCodebook, Sequence[BitString]],
    h: int,
    budget: int = DEFAULT_BUDGET,
) -> VerificationResult:
    """Exhaustively check distinct integer sums over all subsets of size <= h.

    Two subsets of different sizes can share a sum (a string plus the
    all-zero string, say), so every pair of sizes is compared.  Returns the
    lexicographically first collision as a witness.
    """
    strings = tuple(codebook.strings if isinstance(codebook, BhCodebook) else codebook)
    _subset_budget(len(strings), h, budget)
    seen: dict[tuple[int, ...], tuple[BitString, ...]] = {}
    for k in range(1, h + 1):
        for subset in itertools.combinations(strings, k):
            key = real_sum(subset)
            if key in seen and set(seen[key]) != set(subset):
                return VerificationResult(False, (seen[key], subset, key))
            seen.setdefault(key, subset)
    return VerificationResult(True)


def invert_sum(
    codebook: BhCodebook,
    target: Sequence[int],
    hbar: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[BitString, ...]:
    """The unique hbar-subset whose integer sum equals the target.

    Exhaustive subset search; ambiguity means the codebook does not have
    the distinct-sums property at this order.
    """
    target = tuple(int(v) for v in target)
    if len(target) != codebook.n:
        raise LengthMismatch(f"target length {len(target)} != {codebook.n}")
    if math.comb(len(codebook), hbar) > budget:
        raise SearchSpaceTooLarge(
            f"{math.comb(len(codebook), hbar)} subsets exceed the budget {budget}"
        )
    found: Optional[tuple[BitString, ...]] = None
    for subset in itertools.combinations(codebook.strings, hbar):
        if real_sum(subset) == target:
            if found is not None:
                raise AmbiguousSolution(
                    f"both {found} and {subset} sum to the target"
                )
            found = subset
    if found is None:
        raise NoSolution("no codebook subset matches the target sum")
    return found


def invert_mod2_sum(
    codebook: BhCodebook,
    target: BitString,
    hbar: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[BitString, ...]:
    """The unique hbar-subset whose mod-2 sum equals the target.

    For parity-check-backed codebooks with d >= 2h+1 uniqueness is
    structural; for explicit codebooks an ambiguity is reported rather
    than silently resolved.
    """
    if len(target) != codebook.n:
        raise LengthMismatch(f"target length {len(target)} != {codebook.n}")
    if math.comb(len(codebook), hbar) > budget:
        raise SearchSpaceTooLarge(
            f"{math.comb(len(codebook), hbar)} subsets exceed the budget {budget}"
        )
    want = target.as_int
    found: Optional[tuple[BitString, ...]] = None
    for subset in itertools.combinations(codebook.strings, hbar):
        acc = 0
        for s in subset:
            acc ^= s.as_int
        if acc == want:
            if found is not None:
                raise AmbiguousSolution(
                    f"both {found} and {subset} reduce to the target mod 2"
                )
            found = subset
    if found is None:
        raise NoSolution("no codebook subset matches the target mod-2 sum")
    return found


def codebook_rate(codebook: Union[BhCodebook, tuple[int, int]]) -> float:
    """log2(size) / length, in bits per symbol."""
    if isinstance(codebook, BhCodebook):
        size, length = len(codebook), codebook.n
    else:
        size, length = codebook
    if size < 1 or length < 1:
        raise ValueError("rate needs a nonempty codebook and positive length")
    return math.log2(size) / length
