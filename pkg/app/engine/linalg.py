"""Exact linear algebra over the prime field GF(p).

Vectors are int64 numpy rows with entries in [0, p). Products of matrices go
through float64 BLAS and are reduced mod p afterwards; the inner dimension is
bounded by the ambient length so the float sums stay exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# Rows handed to the elimination loop at once when a basis is extended
EXTEND_CHUNK = 256


def to_gf(matrix, p: int) -> np.ndarray:
    return np.mod(np.asarray(matrix, dtype=np.int64), p)


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    product = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(product, p).astype(np.int64)


def row_reduce(matrix, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(p).

    Returns the nonzero rows (pivot entries 1, pivot columns otherwise 0)
    and the pivot column of each row.
    """
    mat = to_gf(matrix, p).copy()
    if mat.ndim == 1:
        mat = mat.reshape(1, -1)
    rows, cols = mat.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(mat[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            mat[[r, k]] = mat[[k, r]]
        lead = int(mat[r, c])
        if lead != 1:
            mat[r] = (mat[r] * pow(lead, -1, p)) % p
        column = mat[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            mat[targets] = (mat[targets] - np.outer(column[targets], mat[r])) % p
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def rank_mod_p(matrix, p: int) -> int:
    return len(row_reduce(matrix, p)[1])


@dataclass
class SubspaceBasis:
    """Row-reduced basis of a subspace of GF(p)^n.

    Rows stay in fully reduced echelon form so reduction of a vector against
    the basis is a single product: v - v[pivots] @ rows.
    """

    p: int
    n: int
    rows: np.ndarray = field(default=None)
    pivots: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.rows is None:
            self.rows = np.zeros((0, self.n), dtype=np.int64)
            self.pivots = np.zeros(0, dtype=np.int64)

    @classmethod
    def spanned_by(cls, vectors, p: int, n: int) -> "SubspaceBasis":
        basis = cls(p, n)
        basis.extend(vectors)
        return basis

    @classmethod
    def whole_space(cls, p: int, n: int) -> "SubspaceBasis":
        return cls(p, n, np.eye(n, dtype=np.int64), np.arange(n, dtype=np.int64))

    @property
    def dim(self) -> int:
        return int(self.rows.shape[0])

    def reduce(self, vectors) -> np.ndarray:
        mat = to_gf(vectors, self.p)
        if mat.ndim == 1:
            mat = mat.reshape(1, -1)
        if self.dim == 0 or mat.shape[0] == 0:
            return mat
        return np.mod(mat - mod_matmul(mat[:, self.pivots], self.rows, self.p), self.p)

    def contains(self, vector) -> bool:
        return not self.reduce(vector).any()

    def contains_rows(self, vectors) -> np.ndarray:
        """Boolean membership mask, one entry per row"""
        return ~self.reduce(vectors).any(axis=1)

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        if self.dim == 0:
            return True
        return bool(other.contains_rows(self.rows).all())

    def extend(self, vectors) -> np.ndarray:
        """Add vectors to the span; returns the rows that enlarged it"""
        mat = to_gf(vectors, self.p)
        if mat.ndim == 1:
            mat = mat.reshape(1, -1)
        added = []
        for start in range(0, mat.shape[0], EXTEND_CHUNK):
            if self.dim == self.n:
                break
            chunk = self.reduce(mat[start:start + EXTEND_CHUNK])
            chunk = chunk[chunk.any(axis=1)]
            if chunk.shape[0] == 0:
                continue
            new_rows, new_pivots = row_reduce(chunk, self.p)
            self._merge(new_rows, new_pivots)
            added.append(new_rows)
        if not added:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.vstack(added)

    def _merge(self, new_rows: np.ndarray, new_pivots: List[int]):
        new_pivots = np.asarray(new_pivots, dtype=np.int64)
        rows = self.rows
        if self.dim:
            rows = np.mod(rows - mod_matmul(rows[:, new_pivots], new_rows, self.p), self.p)
        rows = np.vstack([rows, new_rows])
        pivots = np.concatenate([self.pivots, new_pivots])
        order = np.argsort(pivots, kind="stable")
        self.rows = rows[order]
        self.pivots = pivots[order]
