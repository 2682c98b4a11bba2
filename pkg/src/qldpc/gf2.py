"""Bit-packed dense linear algebra over GF(2).

Rows are packed little-endian into uint64 words; padding bits past the
column count are kept at zero.  This module is the engine under the OSD
post-processor and the code-dimension computations, so the heavy lifting
lives in the numba kernels of :mod:`qldpc._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NoSolution, SizeMismatch


def _n_words(n_bits: int) -> int:
    return (n_bits + 63) >> 6


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, words) uint64."""
    dense = np.ascontiguousarray(dense, dtype=np.uint8)
    rows, cols = dense.shape
    nw = _n_words(cols)
    packed8 = np.packbits(dense, axis=1, bitorder="little")
    buf = np.zeros((rows, nw * 8), dtype=np.uint8)
    buf[:, : packed8.shape[1]] = packed8
    return buf.view(np.uint64).reshape(rows, nw)


def _unpack_rows(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    bits = np.unpackbits(data.view(np.uint8).reshape(rows, -1),
                         axis=1, bitorder="little")
    return np.ascontiguousarray(bits[:, :cols])


class BitVector:
    """Packed bit vector over GF(2)."""

    __slots__ = ("n", "data")

    def __init__(self, n: int, data: np.ndarray | None = None):
        self.n = int(n)
        if data is None:
            data = np.zeros(_n_words(self.n), dtype=np.uint64)
        self.data = data

    @classmethod
    def from_dense(cls, bits) -> "BitVector":
        arr = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        return cls(arr.shape[1], _pack_rows(arr)[0])

    def to_dense(self) -> np.ndarray:
        return _unpack_rows(self.data.reshape(1, -1), self.n)[0]

    def copy(self) -> "BitVector":
        return BitVector(self.n, self.data.copy())

    def get(self, i: int) -> int:
        return int((self.data[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    def set(self, i: int, value: int) -> None:
        mask = np.uint64(1) << np.uint64(i & 63)
        if value:
            self.data[i >> 6] |= mask
        else:
            self.data[i >> 6] &= ~mask

    def weight(self) -> int:
        return int(_kernels.row_weights(self.data.reshape(1, -1))[0])

    def is_zero(self) -> bool:
        return not self.data.any()

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise SizeMismatch(f"length {self.n} vs {other.n}")
        return BitVector(self.n, self.data ^ other.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitVector) and self.n == other.n
                and bool(np.array_equal(self.data, other.data)))

    def __repr__(self) -> str:
        return f"BitVector({self.n}, weight={self.weight()})"


class BitMatrix:
    """Packed binary matrix; treat instances as immutable once built."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if data is None:
            data = np.zeros((self.rows, _n_words(self.cols)), dtype=np.uint64)
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        if dense.size == 0:
            return cls(dense.shape[0], dense.shape[1])
        return cls(dense.shape[0], dense.shape[1], _pack_rows(dense))

    def to_dense(self) -> np.ndarray:
        return _unpack_rows(self.data, self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def get(self, i: int, j: int) -> int:
        return int((self.data[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i].copy())

    def row_weights(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros(0, dtype=np.int64)
        return _kernels.row_weights(self.data)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def take_cols(self, idx) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[:, np.asarray(idx)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitMatrix) and self.rows == other.rows
                and self.cols == other.cols
                and bool(np.array_equal(self.data, other.data)))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def hstack(mats: list[BitMatrix]) -> BitMatrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise SizeMismatch("hstack needs equal row counts")
    return BitMatrix.from_dense(np.hstack([m.to_dense() for m in mats]))


def vstack(mats: list[BitMatrix]) -> BitMatrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise SizeMismatch("vstack needs equal column counts")
    return BitMatrix.from_dense(np.vstack([m.to_dense() for m in mats]))


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise SizeMismatch(f"{a.cols} columns vs {b.rows} rows")
    if a.rows == 0 or b.cols == 0:
        return BitMatrix.zeros(a.rows, b.cols)
    return BitMatrix(a.rows, b.cols, _kernels.matmul_f2(a.data, a.cols, b.data))


def matvec(m: BitMatrix, v: BitVector) -> BitVector:
    if m.cols != v.n:
        raise SizeMismatch(f"{m.cols} columns vs vector length {v.n}")
    if m.rows == 0:
        return BitVector(0)
    bits = _kernels.matvec_parity(m.data, v.data)
    return BitVector.from_dense(bits)


def rank(m: BitMatrix) -> int:
    """Dimension of the row space of m over GF(2)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    work = m.data.copy()
    order = np.arange(m.cols, dtype=np.int64)
    return len(_kernels.eliminate(work, order, False))


@dataclass
class PivotSelection:
    """Ordered independent-column selection plus the solve transform.

    pivot_cols[k] is the k-th column (in the requested scan order) that
    extended the rank; the stored Gauss-Jordan transform maps any
    right-hand side into pivot-row coordinates so H_S x = s' is a
    lookup.
    """

    n_cols: int
    n_rows: int
    pivot_cols: np.ndarray
    free_cols: np.ndarray
    _transform: np.ndarray  # (rows, words) packed E with E @ H in RREF

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)


def select_pivots(m: BitMatrix, column_order=None) -> PivotSelection:
    """Greedy rank-extending column scan in the given order."""
    n = m.cols
    if column_order is None:
        column_order = np.arange(n, dtype=np.int64)
    order = np.asarray(column_order, dtype=np.int64)
    if len(order) != n or len(np.unique(order)) != n:
        raise ValueError("column_order must be a permutation of range(cols)")
    wm = _n_words(m.cols)
    we = _n_words(m.rows)
    aug = np.zeros((m.rows, wm + we), dtype=np.uint64)
    if m.rows:
        aug[:, :m.data.shape[1]] = m.data
        for i in range(m.rows):
            aug[i, wm + (i >> 6)] |= np.uint64(1) << np.uint64(i & 63)
        pivots = _kernels.eliminate(aug, order, True)
    else:
        pivots = np.zeros(0, dtype=np.int64)
    in_pivot = np.zeros(n, dtype=bool)
    in_pivot[pivots] = True
    free = order[~in_pivot[order]]
    return PivotSelection(n, m.rows, np.asarray(pivots), free, aug[:, wm:])


def solve_on_pivots(sel: PivotSelection, s: BitVector) -> BitVector:
    """Solve H_S x = s for the pivot columns S; unique when solvable."""
    if s.n != sel.n_rows:
        raise SizeMismatch(f"rhs length {s.n} vs {sel.n_rows} rows")
    r = sel.rank
    if sel.n_rows == 0:
        return BitVector(0)
    y = _kernels.matvec_parity(sel._transform, s.data)
    if np.any(y[r:]):
        raise NoSolution("syndrome outside the span of the pivot columns")
    return BitVector.from_dense(y[:r]) if r else BitVector(0)


def in_colspace(m: BitMatrix, v: BitVector) -> bool:
    if v.n != m.rows:
        raise SizeMismatch(f"vector length {v.n} vs {m.rows} rows")
    if m.rows == 0:
        return True
    if m.cols == 0:
        return v.is_zero()
    sel = select_pivots(m)
    y = _kernels.matvec_parity(sel._transform, v.data)
    return not np.any(y[sel.rank:])


class RowSpace:
    """Cached RREF of a matrix for repeated row-space membership tests."""

    def __init__(self, m: BitMatrix):
        self.cols = m.cols
        work = m.data.copy()
        if m.rows and m.cols:
            order = np.arange(m.cols, dtype=np.int64)
            self.pivot_cols = _kernels.eliminate(work, order, True)
        else:
            self.pivot_cols = np.zeros(0, dtype=np.int64)
        self.rref = work[: len(self.pivot_cols)].copy()

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def contains(self, v: BitVector) -> bool:
        if v.n != self.cols:
            raise SizeMismatch(f"vector length {v.n} vs {self.cols} columns")
        w = v.data.copy()
        _kernels.reduce_vector(self.rref, self.pivot_cols, w)
        return not w.any()


def in_rowspace(m: BitMatrix, v: BitVector) -> bool:
    return RowSpace(m).contains(v)


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {x : m x = 0}, one vector per row."""
    n = m.cols
    if n == 0:
        return BitMatrix.zeros(0, 0)
    if m.rows == 0:
        return BitMatrix.identity(n)
    work = m.data.copy()
    order = np.arange(n, dtype=np.int64)
    pivots = _kernels.eliminate(work, order, True)
    in_pivot = np.zeros(n, dtype=bool)
    in_pivot[pivots] = True
    free = np.flatnonzero(~in_pivot)
    dense = _unpack_rows(work[: len(pivots)], n)
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, t in enumerate(free):
        basis[k, t] = 1
        basis[k, pivots] = dense[:, t]
    return BitMatrix.from_dense(basis)
