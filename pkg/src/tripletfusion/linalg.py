"""Exact sparse integer matrices stored by column.

Entries are Python ints, so nothing can overflow.  Vectors are plain
``{index: value}`` dicts with zeros dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch

SparseVector = dict

# Products computed in int64 must stay well clear of the overflow edge.
INT64_SAFE = 2**62


def add_into(acc: dict, vec: Mapping[int, int], scale: int = 1) -> dict:
    for k, val in vec.items():
        new = acc.get(k, 0) + scale * val
        if new:
            acc[k] = new
        else:
            acc.pop(k, None)
    return acc


def vec_sub(a: Mapping[int, int], b: Mapping[int, int]) -> dict:
    return add_into(dict(a), b, -1)


@dataclass(frozen=True)
class SparseIntMatrix:
    """A square matrix; ``columns[j]`` is the image of basis vector j."""

    dim: int
    columns: tuple

    @classmethod
    def from_columns(cls, dim: int, columns: Iterable[Mapping[int, int]]) -> SparseIntMatrix:
        cols = tuple({k: int(v) for k, v in c.items() if v} for c in columns)
        if len(cols) != dim:
            raise DimensionMismatch(f"expected {dim} columns, got {len(cols)}")
        for c in cols:
            if any(not 0 <= k < dim for k in c):
                raise DimensionMismatch("row index out of range")
        return cls(dim, cols)

    @classmethod
    def identity(cls, dim: int) -> SparseIntMatrix:
        return cls(dim, tuple({j: 1} for j in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> SparseIntMatrix:
        return cls(dim, tuple({} for _ in range(dim)))

    def column(self, j: int) -> dict:
        return dict(self.columns[j])

    def matvec(self, v: Mapping[int, int]) -> dict:
        out: dict = {}
        for j, val in v.items():
            add_into(out, self.columns[j], val)
        return out

    def __matmul__(self, other: SparseIntMatrix) -> SparseIntMatrix:
        self._check(other)
        return SparseIntMatrix(self.dim, tuple(self.matvec(c) for c in other.columns))

    def __add__(self, other: SparseIntMatrix) -> SparseIntMatrix:
        self._check(other)
        return SparseIntMatrix(
            self.dim, tuple(add_into(dict(a), b) for a, b in zip(self.columns, other.columns))
        )

    def __sub__(self, other: SparseIntMatrix) -> SparseIntMatrix:
        return self + other.scale(-1)

    def scale(self, k: int) -> SparseIntMatrix:
        if k == 0:
            return SparseIntMatrix.zero(self.dim)
        return SparseIntMatrix(self.dim, tuple({i: k * v for i, v in c.items()} for c in self.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def nonzero_columns(self) -> list[int]:
        return [j for j, c in enumerate(self.columns) if c]

    def min_entry(self) -> int:
        return min((v for c in self.columns for v in c.values()), default=0)

    def to_dense(self) -> list[list[int]]:
        rows = [[0] * self.dim for _ in range(self.dim)]
        for j, c in enumerate(self.columns):
            for i, v in c.items():
                rows[i][j] = v
        return rows

    def to_csr(self) -> sp.csr_matrix:
        """int64 CSR copy; refuses entries that would not fit comfortably."""
        data, rows, cols = [], [], []
        for j, c in enumerate(self.columns):
            for i, v in c.items():
                if abs(v) >= INT64_SAFE:
                    raise OverflowError("entry too large for int64")
                rows.append(i)
                cols.append(j)
                data.append(v)
        return sp.csr_matrix(
            (np.array(data, dtype=np.int64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(self.dim, self.dim),
            dtype=np.int64,
        )

    def _check(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim}x{self.dim} versus {other.dim}x{other.dim}")


def guarded_matmul(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    """int64 sparse product that raises OverflowError instead of wrapping.

    Every entry of ``a @ b`` is bounded by the largest absolute row sum of a
    times the largest absolute entry of b.
    """
    a = sp.csr_matrix(a)
    b = sp.csr_matrix(b)
    if a.nnz and b.nnz:
        row_sums = np.asarray(abs(a).sum(axis=1)).ravel()
        bound = int(row_sums.max()) * int(abs(b).max())
        if bound >= INT64_SAFE:
            raise OverflowError("sparse product may exceed int64")
    out = a @ b
    out.eliminate_zeros()
    return sp.csr_matrix(out)


def guarded_add(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    a = sp.csr_matrix(a)
    b = sp.csr_matrix(b)
    bound = (int(abs(a).max()) if a.nnz else 0) + (int(abs(b).max()) if b.nnz else 0)
    if bound >= INT64_SAFE:
        raise OverflowError("sparse sum may exceed int64")
    out = a + b
    out.eliminate_zeros()
    return sp.csr_matrix(out)
