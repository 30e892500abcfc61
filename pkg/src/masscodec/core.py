"""Binary strings, fragment compositions, and composition multisets.

A mass readout of a binary polymer reports, for every fragment, only how
many 0-symbols and 1-symbols it contains -- its *composition* -- not their
order.  Reading a string s of length n from both ends yields one prefix
fragment and one suffix fragment of each length i in [1, n]; the multiset
of their compositions (the full-length composition appears twice) is the
abstraction of the instrument output that every other module consumes.

Conventions used throughout the package:

* Strings are read left to right; a prefix is a run of leading symbols.
* A composition with a zeros and b ones prints as ``0^a 1^b`` with zero
  exponents omitted and exponent one left implicit (``01^2`` means one 0
  and two 1s).
* The running digital sum R(s)_i = 2*wt(s_1..s_i) - i tracks the
  1s-vs-0s discrepancy of prefixes; a balanced string ends at R = 0.
* A string of even length N is a *Dyck string* when wt(s) = N/2 and every
  proper prefix of length i holds at least ceil(i/2) ones.  Dyck strings
  make prefix and suffix fragments separable by weight alone.

All values here are immutable and safe to share across threads.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import Conflict, DuplicateString, LengthMismatch, OddLength

BitsLike = Union[str, Sequence[int], "BitString"]

ERASED = None  # erased symbol marker in partial sum strings
_ERASED_CHAR = "ε"  # printed as the Greek epsilon


class BitString:
    """An immutable binary string of length >= 1."""

    __slots__ = ("bits", "_int", "_hash")

    def __init__(self, bits: BitsLike):
        if isinstance(bits, BitString):
            values = bits.bits
        elif isinstance(bits, str):
            if not all(c in "01" for c in bits):
                raise ValueError(f"not a binary string: {bits!r}")
            values = tuple(1 if c == "1" else 0 for c in bits)
        else:
            values = tuple(int(b) for b in bits)
            if not all(b in (0, 1) for b in values):
                raise ValueError(f"bits must be 0/1, got {values!r}")
        if not values:
            raise ValueError("empty bit string")
        object.__setattr__(self, "bits", values)
        key = 0
        for b in values:
            key = (key << 1) | b
        object.__setattr__(self, "_int", key)
        object.__setattr__(self, "_hash", hash((len(values), key)))

    def __setattr__(self, name, value):
        raise AttributeError("BitString is immutable")

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, i):
        if isinstance(i, slice):
            part = self.bits[i]
            if not part:
                raise IndexError("empty slice of a BitString")
            return BitString(part)
        return self.bits[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitString)
            and len(self.bits) == len(other.bits)
            and self._int == other._int
        )

    def __lt__(self, other: "BitString") -> bool:
        return self.bits < other.bits

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"

    def __add__(self, other: BitsLike) -> "BitString":
        other = BitString(other)
        return BitString(self.bits + other.bits)

    def __xor__(self, other: "BitString") -> "BitString":
        if len(other) != len(self):
            raise LengthMismatch(f"xor of lengths {len(self)} and {len(other)}")
        return BitString(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    @property
    def as_int(self) -> int:
        """The string read as a big-endian integer (first symbol is the MSB)."""
        return self._int

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        return cls(tuple((value >> (length - 1 - i)) & 1 for i in range(length)))

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls((1,) * n)

    @classmethod
    def random(cls, n: int, rng) -> "BitString":
        return cls(tuple(rng.randrange(2) for _ in range(n)))

    def weight(self) -> int:
        return sum(self.bits)

    def prefix(self, i: int) -> "BitString":
        if not 1 <= i <= len(self):
            raise ValueError(f"prefix length {i} out of range")
        return BitString(self.bits[:i])

    def suffix(self, i: int) -> "BitString":
        if not 1 <= i <= len(self):
            raise ValueError(f"suffix length {i} out of range")
        return BitString(self.bits[len(self) - i :])

    def complement(self) -> "BitString":
        return BitString(tuple(1 - b for b in self.bits))

    def rds(self, i: Optional[int] = None) -> int:
        """Running digital sum 2*wt(s_1..s_i) - i; full-string value if i is None."""
        if i is None:
            i = len(self)
        if not 1 <= i <= len(self):
            raise ValueError(f"rds index {i} out of range")
        return 2 * sum(self.bits[:i]) - i

    def rds_profile(self) -> tuple[int, ...]:
        """R(s)_i for every i in [n]."""
        out = []
        r = 0
        for b in self.bits:
            r += 1 if b else -1
            out.append(r)
        return tuple(out)

    def blocks(self, size: int) -> tuple["BitString", ...]:
        if len(self) % size:
            raise ValueError(f"length {len(self)} not divisible by block size {size}")
        return tuple(
            BitString(self.bits[j : j + size]) for j in range(0, len(self), size)
        )

    def real_sum_with(self, *others: "BitString") -> tuple[int, ...]:
        """Coordinate-wise sum over the integers with the given strings."""
        for o in others:
            if len(o) != len(self):
                raise LengthMismatch("real sum of unequal lengths")
        return tuple(sum(bits) for bits in zip(self.bits, *(o.bits for o in others)))


def real_sum(strings: Iterable[BitString]) -> tuple[int, ...]:
    strings = list(strings)
    first, rest = strings[0], strings[1:]
    return first.real_sum_with(*rest)


def mod2_sum(strings: Iterable[BitString]) -> BitString:
    strings = list(strings)
    out = strings[0]
    for s in strings[1:]:
        out = out ^ s
    return out


class Composition:
    """An unordered fragment content: a count of zeros and a count of ones."""

    __slots__ = ("zeros", "ones")

    def __init__(self, zeros: int, ones: int):
        if zeros < 0 or ones < 0 or zeros + ones < 1:
            raise ValueError(f"bad composition ({zeros}, {ones})")
        object.__setattr__(self, "zeros", int(zeros))
        object.__setattr__(self, "ones", int(ones))

    def __setattr__(self, name, value):
        raise AttributeError("Composition is immutable")

    @property
    def length(self) -> int:
        return self.zeros + self.ones

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Composition)
            and self.zeros == other.zeros
            and self.ones == other.ones
        )

    def __hash__(self) -> int:
        return hash((self.zeros, self.ones))

    def __lt__(self, other: "Composition") -> bool:
        return (self.length, self.ones) < (other.length, other.ones)

    def __str__(self) -> str:
        parts = []
        for sym, count in (("0", self.zeros), ("1", self.ones)):
            if count == 1:
                parts.append(sym)
            elif count > 1:
                parts.append(f"{sym}^{count}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Composition(zeros={self.zeros}, ones={self.ones})"

    @classmethod
    def parse(cls, text: str) -> "Composition":
        """Parse the ``0^a 1^b`` notation (spaces optional, exponent 1 implicit).

        Strings like ``0^21^3`` are read as the zeros part followed by the
        ones part (0^2 then 1^3): after ``0^`` the shortest digit run that
        leaves a parseable ones part wins, matching how the notation is
        written.
        """
        text = text.replace(" ", "")

        def parse_ones(rest: str) -> Optional[int]:
            if not rest:
                return 0
            if rest[0] != "1":
                return None
            if len(rest) == 1:
                return 1
            if rest[1] != "^" or not rest[2:].isdigit():
                return None
            return int(rest[2:])

        if text.startswith("0"):
            if text[1:2] == "^":
                digits = 2
                while digits < len(text) and text[digits].isdigit():
                    digits += 1
                if digits == 2:
                    raise ValueError(f"bad exponent in {text!r}")
                for end in range(3, digits + 1):
                    ones = parse_ones(text[end:])
                    if ones is not None:
                        return cls(int(text[2:end]), ones)
                raise ValueError(f"bad composition text {text!r}")
            ones = parse_ones(text[1:])
            if ones is None:
                raise ValueError(f"bad composition text {text!r}")
            return cls(1, ones)
        ones = parse_ones(text)
        if ones is None or ones == 0:
            raise ValueError(f"bad composition text {text!r}")
        return cls(0, ones)

    def to_json_obj(self, mult: int = 1) -> dict:
        return {"zeros": self.zeros, "ones": self.ones, "mult": mult}


def composition(s: BitsLike) -> Composition:
    """The composition of a string: (number of 0s, number of 1s)."""
    s = BitString(s)
    w = s.weight()
    return Composition(len(s) - w, w)


class CompositionMultiset:
    """An immutable multiset of fragment compositions.

    Equality is exact multiplicity equality.  The canonical entry order,
    used for serialization and printing, is (fragment length, ones)
    ascending.
    """

    __slots__ = ("_counts", "_by_length", "_total")

    def __init__(self, items: Union[Mapping[Composition, int], Iterable[Composition], None] = None):
        counts: Counter = Counter()
        if items is not None:
            if isinstance(items, Mapping):
                for comp, mult in items.items():
                    if mult < 0:
                        raise ValueError("negative multiplicity")
                    if mult:
                        counts[comp] += mult
            else:
                for comp in items:
                    counts[comp] += 1
        object.__setattr__(self, "_counts", counts)
        object.__setattr__(self, "_total", sum(counts.values()))
        by_length: dict[int, Counter] = {}
        for comp, mult in counts.items():
            by_length.setdefault(comp.length, Counter())[comp.ones] += mult
        object.__setattr__(self, "_by_length", by_length)

    def __setattr__(self, name, value):
        raise AttributeError("CompositionMultiset is immutable")

    @property
    def total(self) -> int:
        """Number of fragments counted with multiplicity."""
        return self._total

    def __len__(self) -> int:
        return self._total

    def __contains__(self, comp: Composition) -> bool:
        return self._counts[comp] > 0

    def count(self, comp: Composition) -> int:
        return self._counts[comp]

    def __eq__(self, other) -> bool:
        return isinstance(other, CompositionMultiset) and self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def entries(self) -> tuple[tuple[Composition, int], ...]:
        """(composition, multiplicity) pairs in canonical order."""
        return tuple(sorted(self._counts.items(), key=lambda kv: kv[0]))

    def elements(self) -> Iterator[Composition]:
        for comp, mult in self.entries():
            for _ in range(mult):
                yield comp

    def lengths(self) -> tuple[int, ...]:
        return tuple(sorted(self._by_length))

    def count_at_length(self, length: int) -> int:
        return sum(self._by_length.get(length, {}).values())

    def ones_at_length(self, length: int) -> tuple[int, ...]:
        """Sorted ones-counts of all fragments of the given length."""
        c = self._by_length.get(length)
        if not c:
            return ()
        return tuple(sorted(c.elements()))

    def union(self, *others: "CompositionMultiset") -> "CompositionMultiset":
        counts = Counter(self._counts)
        for o in others:
            counts.update(o._counts)
        return CompositionMultiset(counts)

    def add(self, comp: Composition, mult: int = 1) -> "CompositionMultiset":
        counts = Counter(self._counts)
        counts[comp] += mult
        return CompositionMultiset(counts)

    def remove(self, comp: Composition, mult: int = 1) -> "CompositionMultiset":
        if self._counts[comp] < mult:
            raise KeyError(f"multiset holds {self._counts[comp]} of {comp}, need {mult}")
        counts = Counter(self._counts)
        counts[comp] -= mult
        return CompositionMultiset(counts)

    def is_submultiset(self, other: "CompositionMultiset") -> bool:
        return all(other._counts[c] >= m for c, m in self._counts.items())

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self.elements()) + "}"

    def to_json_obj(self) -> list[dict]:
        return [comp.to_json_obj(mult) for comp, mult in self.entries()]

    @classmethod
    def from_json_obj(cls, obj: Iterable[dict]) -> "CompositionMultiset":
        counts: Counter = Counter()
        for entry in obj:
            comp = Composition(entry["zeros"], entry["ones"])
            counts[comp] += int(entry.get("mult", 1))
        return cls(counts)

    @classmethod
    def parse(cls, text: str) -> "CompositionMultiset":
        """Parse ``{0, 01, 0^2 1^3, ...}`` listings (for tests and fixtures)."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        items = [t for t in (part.strip() for part in text.split(",")) if t]
        return cls(Composition.parse(t) for t in items)


def prefix_multiset(s: BitsLike) -> CompositionMultiset:
    """Compositions of all prefixes s_1..s_i, i in [n]."""
    s = BitString(s)
    comps = []
    w = 0
    for i, b in enumerate(s.bits, start=1):
        w += b
        comps.append(Composition(i - w, w))
    return CompositionMultiset(comps)


def suffix_multiset(s: BitsLike) -> CompositionMultiset:
    """Compositions of all suffixes s_i..s_n, i in [n]."""
    s = BitString(s)
    comps = []
    w = 0
    for i, b in enumerate(reversed(s.bits), start=1):
        w += b
        comps.append(Composition(i - w, w))
    return CompositionMultiset(comps)


def full_multiset(s: BitsLike) -> CompositionMultiset:
    """Prefix and suffix compositions together; the full length appears twice."""
    return prefix_multiset(s).union(suffix_multiset(s))


def pool(strings: Iterable[BitsLike]) -> CompositionMultiset:
    """Union of the full multisets of pairwise distinct, equal-length strings."""
    bs = [BitString(s) for s in strings]
    if not bs:
        return CompositionMultiset()
    n = len(bs[0])
    for s in bs[1:]:
        if len(s) != n:
            raise LengthMismatch(f"pooled strings must share length {n}, got {len(s)}")
    if len(set(bs)) != len(bs):
        raise DuplicateString("pooled strings must be pairwise distinct")
    out = full_multiset(bs[0])
    return out.union(*(full_multiset(s) for s in bs[1:]))


def is_dyck(s: BitsLike) -> bool:
    """True when wt(s) = N/2 and every prefix of length i has >= ceil(i/2) ones."""
    s = BitString(s)
    n = len(s)
    if n % 2:
        raise OddLength(f"Dyck property needs even length, got {n}")
    if s.weight() != n // 2:
        return False
    w = 0
    for i, b in enumerate(s.bits[:-1], start=1):
        w += b
        if w < (i + 1) // 2:
            return False
    return True


def all_dyck_strings(n: int) -> tuple[BitString, ...]:
    """All Dyck strings of even length n, in ascending lexicographic order."""
    if n % 2:
        raise OddLength(f"no Dyck strings of odd length {n}")
    found = [
        s
        for s in (BitString.from_int(v, n) for v in range(2**n))
        if is_dyck(s)
    ]
    return tuple(found)


class PartialSumString:
    """A length-indexed sum of a string mixture with possible erasures.

    Symbols live in {0, ..., hbar} or are erased (None).  The string is the
    coordinate-wise integer sum of ``hbar`` binary strings, reconstructed
    from a (possibly incomplete) one-sided fragment pool.
    """

    __slots__ = ("symbols", "hbar")

    def __init__(self, symbols: Iterable[Optional[int]], hbar: int):
        syms = tuple(None if v is None else int(v) for v in symbols)
        if hbar < 1:
            raise ValueError("hbar must be positive")
        for v in syms:
            if v is not None and not 0 <= v <= hbar:
                raise ValueError(f"symbol {v} outside 0..{hbar}")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "hbar", hbar)

    def __setattr__(self, name, value):
        raise AttributeError("PartialSumString is immutable")

    @classmethod
    def parse(cls, text: str, hbar: int) -> "PartialSumString":
        """Parse digit strings with epsilon (or '?') marking erased symbols."""
        syms: list[Optional[int]] = []
        for c in text:
            if c in (_ERASED_CHAR, "e", "?"):
                syms.append(None)
            else:
                syms.append(int(c))
        return cls(syms, hbar)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialSumString)
            and self.symbols == other.symbols
            and self.hbar == other.hbar
        )

    def __hash__(self) -> int:
        return hash((self.symbols, self.hbar))

    def __str__(self) -> str:
        return "".join(_ERASED_CHAR if v is None else str(v) for v in self.symbols)

    def __repr__(self) -> str:
        return f"PartialSumString({str(self)!r}, hbar={self.hbar})"

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.symbols)

    def as_tuple(self) -> tuple[int, ...]:
        if not self.complete:
            raise ValueError("partial sum still has erasures")
        return self.symbols  # type: ignore[return-value]

    def to_bitstring(self) -> BitString:
        """Interpret as a binary string (valid for hbar-free 0/1 content)."""
        vals = self.as_tuple()
        if any(v not in (0, 1) for v in vals):
            raise ValueError("sum symbols exceed 1; not a single string")
        return BitString(vals)

    def erased_positions(self) -> tuple[int, ...]:
        """1-based positions of erased symbols."""
        return tuple(i for i, v in enumerate(self.symbols, start=1) if v is None)

    def bursts(self) -> tuple[tuple[int, int], ...]:
        """Maximal runs of erased symbols as (start, length), 1-based."""
        out = []
        start = None
        for i, v in enumerate(self.symbols, start=1):
            if v is None:
                if start is None:
                    start = i
            elif start is not None:
                out.append((start, i - start))
                start = None
        if start is not None:
            out.append((start, len(self.symbols) - start + 1))
        return tuple(out)

    def known_weight(self) -> int:
        return sum(v for v in self.symbols if v is not None)

    def reversed_(self) -> "PartialSumString":
        return PartialSumString(tuple(reversed(self.symbols)), self.hbar)

    def merge(self, other: "PartialSumString") -> "PartialSumString":
        """Coordinate-wise combine; known symbols must agree where both exist."""
        if len(other) != len(self) or other.hbar != self.hbar:
            raise LengthMismatch("cannot merge partial sums of different shape")
        merged: list[Optional[int]] = []
        clashes = []
        for i, (a, b) in enumerate(zip(self.symbols, other.symbols), start=1):
            if a is None:
                merged.append(b)
            elif b is None or a == b:
                merged.append(a)
            else:
                clashes.append((i, a, b))
        if clashes:
            raise Conflict(f"disagreeing sum symbols at {clashes}")
        return PartialSumString(merged, self.hbar)

    def fill_from_weight(self, total_weight: int) -> "PartialSumString":
        """Resolve erasures pinned by the known total weight.

        Three sound rules: a lone erasure takes the whole deficit; a zero
        deficit zeroes every erasure; a deficit of hbar per erasure maxes
        every erasure.  Anything else is left erased.
        """
        erased = [i for i, v in enumerate(self.symbols) if v is None]
        if not erased:
            if self.known_weight() != total_weight:
                raise Conflict(
                    f"sum weight {self.known_weight()} != expected {total_weight}"
                )
            return self
        deficit = total_weight - self.known_weight()
        if deficit < 0 or deficit > len(erased) * self.hbar:
            raise Conflict(f"weight deficit {deficit} unreachable")
        fill: Optional[int] = None
        if deficit == 0:
            fill = 0
        elif deficit == len(erased) * self.hbar:
            fill = self.hbar
        elif len(erased) == 1:
            fill = deficit
        if fill is None:
            return self
        syms = list(self.symbols)
        for i in erased:
            syms[i] = fill
        return PartialSumString(syms, self.hbar)


def subsets_of(items: Sequence, max_size: int) -> Iterator[tuple]:
    """All subsets of size 1..max_size, smallest first."""
    for k in range(1, max_size + 1):
        yield from itertools.combinations(items, k)
