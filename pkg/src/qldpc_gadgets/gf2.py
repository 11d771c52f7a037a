"""Dense GF(2) linear algebra on bit-packed rows.

Every row is a Python ``int`` whose bit ``j`` holds column ``j``.  Row
operations are single XORs on those integers, which keeps elimination on the
few-hundred-column matrices used here fast without any native code.

Pivot choice is always the lowest available column index, so echelon forms
and kernel bases are reproducible from run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``x`` in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class BitVector:
    """A fixed-length binary vector."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        return cls(length, mask_of(support))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVector":
        return cls(len(values), mask_of(i for i, v in enumerate(values) if v & 1))

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(bits_of(self.bits))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return popcount(self.bits & other.bits) & 1

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def _check(self, other: "BitVector") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __repr__(self) -> str:
        return f"BitVector({''.join(map(str, self.to_list()))})"


class BitMatrix:
    """Immutable dense binary matrix stored as packed row integers."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[int], ncols: int):
        rows = tuple(int(r) for r in rows)
        limit = 1 << ncols
        for i, r in enumerate(rows):
            if r < 0 or r >= limit:
                raise ValueError(f"row {i} has bits outside {ncols} columns")
        self._rows = rows
        self._ncols = ncols

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], ncols: int) -> "BitMatrix":
        return cls([mask_of(s) for s in supports], ncols)

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows = [mask_of(np.flatnonzero(row).tolist()) for row in a]
        return cls(rows, a.shape[1])

    # shape and access ---------------------------------------------------

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self._ncols:
            raise IndexError(j)
        return (self._rows[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self._ncols, self._rows[i])

    def row_support(self, i: int) -> tuple[int, ...]:
        return tuple(bits_of(self._rows[i]))

    def supports(self) -> list[tuple[int, ...]]:
        return [tuple(bits_of(r)) for r in self._rows]

    def column_supports(self) -> list[tuple[int, ...]]:
        cols: list[list[int]] = [[] for _ in range(self._ncols)]
        for i, r in enumerate(self._rows):
            for j in bits_of(r):
                cols[j].append(i)
        return [tuple(c) for c in cols]

    def to_numpy(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self._rows):
            out[i, list(bits_of(r))] = 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    # algebra ------------------------------------------------------------

    def transpose(self) -> "BitMatrix":
        cols = [0] * self._ncols
        for i, r in enumerate(self._rows):
            for j in bits_of(r):
                cols[j] |= 1 << i
        return BitMatrix(cols, self.nrows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self._ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self._rows:
            acc = 0
            for j in bits_of(r):
                acc ^= orows[j]
            out.append(acc)
        return BitMatrix(out, other.ncols)

    def apply(self, v: BitVector) -> BitVector:
        """Return ``M v`` for a column vector ``v`` of length ``ncols``."""
        if v.length != self._ncols:
            raise ValueError("length mismatch")
        bits = 0
        for i, r in enumerate(self._rows):
            if popcount(r & v.bits) & 1:
                bits |= 1 << i
        return BitVector(self.nrows, bits)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self._ncols != other.ncols:
            raise ValueError("column count mismatch")
        return BitMatrix(self._rows + other.rows, self._ncols)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        shift = self._ncols
        return BitMatrix(
            [a | (b << shift) for a, b in zip(self._rows, other.rows)],
            self._ncols + other.ncols,
        )

    def select_columns(self, columns: Sequence[int]) -> "BitMatrix":
        """Submatrix on ``columns``; new column ``t`` is old column ``columns[t]``."""
        out = []
        for r in self._rows:
            v = 0
            for t, c in enumerate(columns):
                if (r >> c) & 1:
                    v |= 1 << t
            out.append(v)
        return BitMatrix(out, len(columns))

    def select_rows(self, rows: Sequence[int]) -> "BitMatrix":
        return BitMatrix([self._rows[i] for i in rows], self._ncols)


# elimination ------------------------------------------------------------


def _eliminate(rows: list[int], ncols: int, full: bool = True) -> list[int]:
    """In-place row reduction; returns pivot columns (lowest index first)."""
    pivots: list[int] = []
    top = 0
    nrows = len(rows)
    for col in range(ncols):
        bit = 1 << col
        pivot = -1
        for i in range(top, nrows):
            if rows[i] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[top], rows[pivot] = rows[pivot], rows[top]
        prow = rows[top]
        start = 0 if full else top + 1
        for i in range(start, nrows):
            if i != top and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(col)
        top += 1
        if top == nrows:
            break
    return pivots


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form (zero rows dropped) and its pivot columns."""
    rows = list(m.rows)
    pivots = _eliminate(rows, m.ncols)
    return BitMatrix(rows[: len(pivots)], m.ncols), pivots


def rank(m: BitMatrix) -> int:
    rows = list(m.rows)
    return len(_eliminate(rows, m.ncols, full=False))


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of ``{v : M v = 0}``, one basis vector per free column.

    The vector for free column ``f`` has a 1 at ``f``, zeros at every other
    free column, and whatever the pivot columns need to cancel.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(reduced.rows, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(basis, m.ncols)


def solve_linear(m: BitMatrix, b: BitVector) -> BitVector | None:
    """Find ``x`` (length ``nrows``) with ``sum_i x_i * row_i = b``.

    Returns ``None`` when ``b`` is outside the row space.  The solution is
    checked by substitution before it is returned.
    """
    if b.length != m.ncols:
        raise ValueError(f"target has length {b.length}, rows have {m.ncols} columns")
    space = RowSpace(m)
    x = space.coordinates(b.bits)
    if x is None:
        return None
    acc = 0
    for i in bits_of(x):
        acc ^= m.rows[i]
    assert acc == b.bits, "substitution check failed"
    return BitVector(m.nrows, x)


class RowSpace:
    """Echelon basis of a row space supporting fast membership queries.

    Each basis row remembers which original rows were combined to form it, so
    the same object answers both "is ``v`` in the span" and "which rows
    produce ``v``".
    """

    def __init__(self, m: BitMatrix | Sequence[int] = (), ncols: int | None = None):
        if isinstance(m, BitMatrix):
            rows, ncols = m.rows, m.ncols
        else:
            rows = list(m)
            if ncols is None:
                raise ValueError("ncols is required for raw rows")
        self.ncols = ncols
        self._basis: list[int] = []
        self._combos: list[int] = []
        self._lead: list[int] = []
        self._count = 0
        for r in rows:
            self.add(r)

    def add(self, v: int) -> bool:
        """Append ``v`` as the next original row; True if the span grew."""
        c = 1 << self._count
        self._count += 1
        for bvec, bc, p in zip(self._basis, self._combos, self._lead):
            if (v >> p) & 1:
                v ^= bvec
                c ^= bc
        if not v:
            return False
        p = (v & -v).bit_length() - 1
        # keep the basis fully reduced on pivot columns
        for t in range(len(self._basis)):
            if (self._basis[t] >> p) & 1:
                self._basis[t] ^= v
                self._combos[t] ^= c
        self._basis.append(v)
        self._combos.append(c)
        self._lead.append(p)
        return True

    @property
    def dimension(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> list[int]:
        return list(self._basis)

    def reduce(self, v: int) -> int:
        """Canonical representative of ``v`` modulo the span."""
        for bvec, p in zip(self._basis, self._lead):
            if (v >> p) & 1:
                v ^= bvec
        return v

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def coordinates(self, v: int) -> int | None:
        """Mask of original rows summing to ``v``, or None if ``v`` is outside."""
        c = 0
        for bvec, bc, p in zip(self._basis, self._combos, self._lead):
            if (v >> p) & 1:
                v ^= bvec
                c ^= bc
        return c if v == 0 else None


def inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("matrix is not square")
    rows = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    pivots = _eliminate(rows, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return BitMatrix([r >> n for r in rows], n)
