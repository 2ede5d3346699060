"""Packed GF(2) linear algebra: bit vectors, square bit matrices, rank,
inversion, uniform full-rank sampling and syndrome computation.

Vectors and matrix rows are packed into Python integers. Bit i of a
length-n vector sits at integer bit (n-1-i), so comparing the packed
values compares vectors lexicographically with index 0 most significant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitVec",
    "BitMatrix",
    "FullRankMatrix",
    "SingularMatrixError",
    "mat_vec",
    "mat_mul",
    "rank",
    "invert",
    "sample_full_rank",
    "random_bitvec",
    "matrix_to_hex",
    "matrix_from_hex",
]


class SingularMatrixError(ValueError):
    """Raised when a matrix expected to be invertible over GF(2) is not."""


class BitVec:
    """Immutable fixed-length binary vector packed into an int.

    Packed so that integer order equals lexicographic order of the bit
    sequence (bit 0 most significant).
    """

    __slots__ = ("value", "n")

    def __init__(self, value: int, n: int):
        if n < 1:
            raise ValueError("length must be positive")
        if value < 0 or value >> n:
            raise ValueError(f"value {value} out of range for {n} bits")
        self.value = value
        self.n = n

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        v = 0
        n = 0
        for b in bits:
            b = int(b)
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            v = (v << 1) | b
            n += 1
        return cls(v, n)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitVec":
        return cls.from_bits(np.asarray(arr).astype(np.int64).tolist())

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(0, n)

    def to_array(self) -> np.ndarray:
        shifts = np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return ((self.value >> shifts) & 1).astype(np.uint8)

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - i)) & 1 for i in range(self.n))

    def prefix(self, k: int) -> "BitVec":
        if not 1 <= k <= self.n:
            raise ValueError("bad prefix length")
        return BitVec(self.value >> (self.n - k), k)

    def popcount(self) -> int:
        return self.value.bit_count()

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> (self.n - 1 - i)) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVec(self.value ^ other.value, self.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVec) and self.n == other.n and self.value == other.value
        )

    def __lt__(self, other: "BitVec") -> bool:
        return self.value < other.value

    def __hash__(self) -> int:
        return hash((self.value, self.n))

    def __repr__(self) -> str:
        return f"BitVec('{''.join(str(b) for b in self.bits())}')"


class BitMatrix:
    """Square binary matrix stored as packed row integers."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Sequence[int], n: int):
        if n < 1:
            raise ValueError("dimension must be positive")
        if len(rows) != n:
            raise ValueError("matrix must be square")
        for r in rows:
            if r < 0 or r >> n:
                raise ValueError("row out of range")
        self.rows = tuple(int(r) for r in rows)
        self.n = n

    @classmethod
    def from_rows(cls, rows: Sequence) -> "BitMatrix":
        packed = []
        n = len(rows)
        for r in rows:
            if isinstance(r, BitVec):
                packed.append(r.value)
            elif isinstance(r, int):
                packed.append(r)
            else:
                packed.append(BitVec.from_bits(r).value)
        return cls(packed, n)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square 2-d array")
        return cls.from_rows([list(row) for row in arr.tolist()])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << (n - 1 - i) for i in range(n)], n)

    def row(self, i: int) -> BitVec:
        return BitVec(self.rows[i], self.n)

    def to_array(self) -> np.ndarray:
        out = np.empty((self.n, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.n):
                out[i, j] = (r >> (self.n - 1 - j)) & 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix) and self.n == other.n and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.n))

    def __repr__(self) -> str:
        return f"BitMatrix(n={self.n})"


def mat_vec(m: BitMatrix, x: BitVec) -> BitVec:
    """Syndrome map x -> x M^T: output bit j is <x, row_j(M)> mod 2."""
    if x.n != m.n:
        raise ValueError("length mismatch")
    v = 0
    xv = x.value
    for r in m.rows:
        v = (v << 1) | ((xv & r).bit_count() & 1)
    return BitVec(v, m.n)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product A B over GF(2)."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    n = a.n
    out = []
    for ra in a.rows:
        acc = 0
        for j in range(n):
            if (ra >> (n - 1 - j)) & 1:
                acc ^= b.rows[j]
        out.append(acc)
    return BitMatrix(out, n)


def _eliminate(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Row-reduce packed rows; returns (reduced rows, pivot columns).

    Deterministic: pivots are chosen at the lowest available column index,
    using the first row that has a 1 there.
    """
    rows = list(rows)
    pivots: list[int] = []
    pivot_rows: list[int] = []
    r = 0
    for col in range(n):
        bit = 1 << (n - 1 - col)
        sel = None
        for i in range(r, len(rows)):
            if rows[i] & bit:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        pivot_rows.append(rows[r])
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: BitMatrix) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    _, pivots = _eliminate(list(m.rows), m.n)
    return len(pivots)


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises SingularMatrixError if not invertible."""
    n = m.n
    # augmented rows: [row | identity row] packed into one int of width 2n
    aug = [(m.rows[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
    r = 0
    for col in range(n):
        bit = 1 << (2 * n - 1 - col)
        sel = None
        for i in range(r, n):
            if aug[i] & bit:
                sel = i
                break
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        for i in range(n):
            if i != r and aug[i] & bit:
                aug[i] ^= aug[r]
        r += 1
    if r < n:
        raise SingularMatrixError("not invertible")
    mask = (1 << n) - 1
    return BitMatrix([row & mask for row in aug], n)


@dataclass(frozen=True)
class FullRankMatrix:
    """A full-rank parity-check matrix with its inverse cached."""

    h: BitMatrix
    h_inv: BitMatrix

    @property
    def n(self) -> int:
        return self.h.n

    def codeword_for_syndrome(self, t: BitVec) -> BitVec:
        """The unique x with x H^T = t."""
        return mat_vec(self.h_inv, t)


def sample_full_rank(n: int, rng: np.random.Generator) -> FullRankMatrix:
    """Uniformly random invertible n x n matrix over GF(2).

    Rejection sampling from uniform matrices; acceptance probability is
    prod_{i=1..n} (1 - 2^-i) > 0.288, so a handful of attempts suffice.
    """
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        if n <= 63:
            rows = [int(v) for v in rng.integers(0, 1 << n, size=n, dtype=np.uint64)]
        else:
            bits = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
            rows = [int("".join(map(str, row)), 2) for row in bits.tolist()]
        m = BitMatrix(rows, n)
        try:
            inv = invert(m)
        except SingularMatrixError:
            continue
        return FullRankMatrix(m, inv)


def random_bitvec(n: int, rng: np.random.Generator) -> BitVec:
    if n <= 63:
        return BitVec(int(rng.integers(0, 1 << n, dtype=np.uint64)), n)
    bits = rng.integers(0, 2, size=n, dtype=np.uint8)
    return BitVec.from_array(bits)


def matrix_to_hex(m: BitMatrix) -> str:
    """Hex dump, one row per line, fixed width so leading zeros survive."""
    width = (m.n + 3) // 4
    return "\n".join(f"{r:0{width}x}" for r in m.rows) + "\n"


def matrix_from_hex(text: str) -> BitMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n = len(lines)
    rows = [int(ln, 16) for ln in lines]
    return BitMatrix(rows, n)
