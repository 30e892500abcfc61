"""Small binary linear codes with systematic encoders and erasure solvers.

These are plain table-driven codes: a parity-check matrix, a systematic
encoder derived from it, and decoders that solve for erased positions by
Gaussian elimination (any pattern of up to d-1 erasures is solvable) or,
for substitutions at desk scale, by exhaustive nearest-codeword search.
A matching mod-p variant supports syndrome protection over a prime field.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DecodeFailure, SearchSpaceTooLarge, TooManyErasures


def _as_matrix(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(np.uint8) % 2
    out = []
    for row in rows:
        if isinstance(row, str):
            out.append([int(c) for c in row])
        else:
            out.append([int(b) for b in row])
    return np.array(out, dtype=np.uint8) % 2


def rref_gf2(
    mat: np.ndarray, column_order: Optional[Sequence[int]] = None
) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Pivots are chosen scanning columns in the given order (default left to
    right); returns the nonzero rows and the pivot column of each row.
    """
    a = mat.copy() % 2
    rows, cols = a.shape
    order = range(cols) if column_order is None else column_order
    pivots = []
    r = 0
    for c in order:
        pivot = next((i for i in range(r, rows) if a[i, c]), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


class LinearCode:
    """[n, k, d] binary code held as a reduced parity-check matrix.

    Pivot columns are chosen as far right as possible, so for matrices in
    (or reducible to) standard form the information set is the first k
    positions and a systematic codeword reads message||parity.
    """

    def __init__(self, name: str, d: int, H: np.ndarray, pivots: Sequence[int]):
        self.name = name
        self.d = d
        self.H = H
        self.pivots = tuple(pivots)
        self.n = H.shape[1]
        self.k = self.n - H.shape[0]
        self.info_positions = tuple(c for c in range(self.n) if c not in self.pivots)
        self._generator: Optional[np.ndarray] = None
        self._table: Optional[np.ndarray] = None
        if self.k < 1 or d < 1:
            raise ConfigError(f"bad code parameters n={self.n}, k={self.k}, d={d}")

    @classmethod
    def from_parity_check(cls, rows, d: int, name: str = "custom") -> "LinearCode":
        H = _as_matrix(rows)
        reduced, pivots = rref_gf2(H, column_order=range(H.shape[1] - 1, -1, -1))
        return cls(name=name, d=d, H=reduced, pivots=pivots)

    def __repr__(self) -> str:
        return f"LinearCode({self.name}: n={self.n}, k={self.k}, d={self.d})"

    @property
    def erasure_capability(self) -> int:
        return self.d - 1

    @property
    def error_capability(self) -> int:
        return (self.d - 1) // 2

    def encode(self, message: Sequence[int]) -> tuple[int, ...]:
        """Place the message on the information set and solve each parity.

        H is reduced, so every row determines its own pivot position from
        the information symbols alone.
        """
        if len(message) != self.k:
            raise ValueError(f"message length {len(message)} != k={self.k}")
        word = [0] * self.n
        for pos, bit in zip(self.info_positions, message):
            word[pos] = int(bit) & 1
        for r, pc in enumerate(self.pivots):
            acc = 0
            for c in np.flatnonzero(self.H[r]):
                if c != pc:
                    acc ^= word[c]
            word[pc] = acc
        return tuple(word)

    def extract_message(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(word[pos]) & 1 for pos in self.info_positions)

    def is_codeword(self, word: Sequence[int]) -> bool:
        vec = np.array([int(b) & 1 for b in word], dtype=np.uint8)
        return not (self.H @ vec % 2).any()

    @property
    def generator(self) -> np.ndarray:
        if self._generator is None:
            rows = []
            for i in range(self.k):
                msg = [0] * self.k
                msg[i] = 1
                rows.append(self.encode(msg))
            self._generator = np.array(rows, dtype=np.uint8)
        return self._generator

    def _codeword_table(self, budget: int = 2**20) -> np.ndarray:
        if self._table is None:
            if 2**self.k > budget:
                raise SearchSpaceTooLarge(
                    f"2^{self.k} codewords exceed the table budget {budget}"
                )
            msgs = np.arange(2**self.k, dtype=np.uint32)
            bits = ((msgs[:, None] >> np.arange(self.k, dtype=np.uint32)) & 1).astype(
                np.uint8
            )
            self._table = bits @ self.generator % 2
        return self._table

    def decode_erasures(self, word: Sequence[Optional[int]]) -> tuple[int, ...]:
        """Solve H x = 0 for the erased positions (None entries)."""
        erased = [i for i, b in enumerate(word) if b is None]
        if not erased:
            out = tuple(int(b) & 1 for b in word)
            if not self.is_codeword(out):
                raise DecodeFailure("received word is not a codeword")
            return out
        known = np.array(
            [0 if b is None else int(b) & 1 for b in word], dtype=np.uint8
        )
        rhs = self.H @ known % 2
        aug = np.concatenate([self.H[:, erased], rhs[:, None]], axis=1)
        reduced, pivots = rref_gf2(aug)
        cols = len(erased)
        if cols in pivots:
            raise DecodeFailure("erasure system is inconsistent")
        if len(pivots) < cols:
            raise TooManyErasures(f"{cols} erasures leave the code underdetermined")
        solution = dict(zip(pivots, (int(row[-1]) for row in reduced)))
        out = list(int(b) for b in known)
        for j, pos in enumerate(erased):
            out[pos] = solution[j]
        return tuple(out)

    def decode_errors(
        self,
        word: Sequence[int],
        max_errors: Optional[int] = None,
        budget: int = 2**20,
    ) -> tuple[int, ...]:
        """Nearest codeword within the error radius, by exhaustive scan."""
        if max_errors is None:
            max_errors = self.error_capability
        received = np.array([int(b) & 1 for b in word], dtype=np.uint8)
        table = self._codeword_table(budget)
        dists = (table != received).sum(axis=1)
        best = int(dists.argmin())
        if int(dists[best]) > max_errors:
            raise DecodeFailure(
                f"no codeword within {max_errors} errors (closest: {int(dists[best])})"
            )
        return tuple(int(b) for b in table[best])

    def exact_min_distance(self, budget: int = 2**22) -> int:
        """Minimum nonzero codeword weight, streamed in blocks."""
        if 2**self.k > budget:
            raise SearchSpaceTooLarge(
                f"2^{self.k} codewords exceed the budget {budget}"
            )
        if self.k == self.n:
            return 1
        G = self.generator
        best = self.n
        block = 1 << 14
        for start in range(1, 2**self.k, block):
            msgs = np.arange(start, min(start + block, 2**self.k), dtype=np.uint32)
            bits = ((msgs[:, None] >> np.arange(self.k, dtype=np.uint32)) & 1).astype(
                np.uint8
            )
            weights = (bits @ G % 2).sum(axis=1)
            best = min(best, int(weights.min()))
        return best

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "H": ["".join(str(int(b)) for b in row) for row in self.H],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LinearCode":
        code = cls.from_parity_check(obj["H"], obj["d"], obj.get("name", "custom"))
        if code.n != obj["n"] or code.k != obj["k"]:
            raise ConfigError(
                f"declared (n,k)=({obj['n']},{obj['k']}) but matrix gives "
                f"({code.n},{code.k})"
            )
        return code


def trivial_code(k: int) -> LinearCode:
    """[k, k, 1]: no redundancy at all."""
    return LinearCode(
        name=f"trivial_{k}", d=1, H=np.zeros((0, k), dtype=np.uint8), pivots=()
    )


def single_parity(k: int) -> LinearCode:
    """[k+1, k, 2]: one overall parity bit; corrects one erasure."""
    return LinearCode(
        name=f"parity_{k}", d=2, H=np.ones((1, k + 1), dtype=np.uint8), pivots=(k,)
    )


def double_parity(k: int) -> LinearCode:
    """[k+2, k, 2]: the overall parity bit written twice.

    Same erasure capability as single_parity; the even number of checks is
    what the running-sum scheme wants, so that a symbol masking every
    parity at once cannot cancel out of the check equations.
    """
    H = np.ones((2, k + 2), dtype=np.uint8)
    H[0, k + 1] = 0
    H[1, k] = 0
    return LinearCode(name=f"parity2_{k}", d=2, H=H, pivots=(k, k + 1))


def hamming_code(r: int) -> LinearCode:
    """[2^r - 1, 2^r - 1 - r, 3] arranged with information symbols first."""
    n = 2**r - 1
    cols = sorted(range(1, n + 1), key=lambda v: (bin(v).count("1") == 1, v))
    H = np.array(
        [[(c >> b) & 1 for c in cols] for b in range(r - 1, -1, -1)], dtype=np.uint8
    )
    code = LinearCode.from_parity_check(H, 3, name=f"hamming_{n}")
    return code


def shortened(code: LinearCode, k_target: int, name: Optional[str] = None) -> LinearCode:
    """Drop leading information positions; distance can only grow."""
    drop = code.k - k_target
    if drop < 0:
        raise ConfigError(f"cannot shorten {code.name} from k={code.k} to {k_target}")
    if drop == 0:
        return code
    dropped = set(code.info_positions[:drop])
    keep = [c for c in range(code.n) if c not in dropped]
    return LinearCode.from_parity_check(
        code.H[:, keep], code.d, name or f"{code.name}_s{k_target}"
    )


def erasure_code(k: int, capability: int) -> LinearCode:
    """Smallest shipped code with the given dimension and erasure capability."""
    if capability <= 0:
        return trivial_code(k)
    if capability == 1:
        return single_parity(k)
    if capability == 2:
        r = 2
        while 2**r - 1 - r < k:
            r += 1
        return shortened(hamming_code(r), k)
    code = bundled_code("bch_63_16")
    if code.k == k and code.erasure_capability >= capability:
        return code
    raise ConfigError(f"no shipped code with k={k} and erasure capability {capability}")


def substitution_code(k: int, error_capability: int) -> LinearCode:
    """Smallest shipped code with the given dimension and error capability."""
    if error_capability <= 0:
        return trivial_code(k)
    if error_capability == 1:
        r = 2
        while 2**r - 1 - r < k:
            r += 1
        return shortened(hamming_code(r), k)
    if error_capability == 2:
        base = bundled_code("bch_31_21")
        if k <= base.k:
            return shortened(base, k)
    code = bundled_code("bch_63_16")
    if code.k == k and code.error_capability >= error_capability:
        return code
    raise ConfigError(
        f"no shipped code with k={k} and error capability {error_capability}"
    )


_BUNDLED: dict[str, LinearCode] = {}


def bundled_code(name: str) -> LinearCode:
    if name not in _BUNDLED:
        res = resources.files("masscodec").joinpath("data", f"{name}.json")
        try:
            obj = json.loads(res.read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"no bundled code named {name!r}") from exc
        _BUNDLED[name] = LinearCode.from_json_obj(obj)
    return _BUNDLED[name]


# ---------------------------------------------------------------------------
# prime-field analogue for syndrome protection over Z_p


class ModpCode:
    """Syndrome map H over Z_p with a verified pairwise-column capability."""

    def __init__(self, p: int, H: np.ndarray, capability: int):
        self.p = p
        self.H = H % p
        self.capability = capability
        self.n = H.shape[1]
        self.n_rows = H.shape[0]

    def syndrome(self, vec: Sequence[int]) -> tuple[int, ...]:
        v = np.array([int(x) % self.p for x in vec], dtype=np.int64)
        return tuple(int(x) for x in (self.H @ v) % self.p)

    def solve_erasures(
        self,
        vec: Sequence[Optional[int]],
        syndrome: Sequence[Optional[int]],
    ) -> tuple[int, ...]:
        """Fill erased entries so H.vec matches the usable syndrome rows."""
        erased = [i for i, x in enumerate(vec) if x is None]
        rows = [r for r, s in enumerate(syndrome) if s is not None]
        known = np.array(
            [0 if x is None else int(x) % self.p for x in vec], dtype=np.int64
        )
        if not erased:
            got = (self.H[rows] @ known) % self.p
            if any(int(g) != int(syndrome[r]) % self.p for g, r in zip(got, rows)):
                raise DecodeFailure("syndrome mismatch on a complete vector")
            return tuple(int(x) for x in known)
        H = self.H[rows]
        rhs = (
            np.array([int(syndrome[r]) for r in rows], dtype=np.int64) - H @ known
        ) % self.p
        sol = _solve_modp(H[:, erased] % self.p, rhs, self.p)
        if sol is None:
            raise TooManyErasures(
                f"{len(erased)} erasures with {len(rows)} usable syndrome rows"
            )
        out = list(int(x) for x in known)
        for pos, val in zip(erased, sol):
            out[pos] = int(val)
        return tuple(out)


def _solve_modp(A: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Unique solution of A x = b mod p, or None when not uniquely solvable."""
    A = A.copy() % p
    b = b.copy() % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if A[i, c]), None)
        if pivot is None:
            return None  # free variable: not unique
        A[[r, pivot]] = A[[pivot, r]]
        b[[r, pivot]] = b[[pivot, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        b[r] = (b[r] * inv) % p
        for i in range(rows):
            if i != r and A[i, c]:
                factor = int(A[i, c])
                A[i] = (A[i] - factor * A[r]) % p
                b[i] = (b[i] - factor * b[r]) % p
        r += 1
    for i in range(r, rows):
        if b[i] % p:
            return None  # inconsistent
    return b[:cols]


def modp_code(p: int, n: int, rows: int = 4) -> ModpCode:
    """Deterministic H over Z_p with every pair of columns independent.

    Columns are canonical projective representatives, so any two are
    linearly independent: erasure capability 2 with full syndrome rows.
    """
    cols = []
    for val in range(1, p**rows):
        digits = []
        v = val
        for _ in range(rows):
            digits.append(v % p)
            v //= p
        if next(d for d in digits if d) != 1:
            continue
        cols.append(tuple(reversed(digits)))
        if len(cols) == n:
            break
    if len(cols) < n:
        raise ConfigError(f"Z_{p}^{rows} has too few projective columns for n={n}")
    H = np.array(cols, dtype=np.int64).T % p
    return ModpCode(p=p, H=H, capability=2)
