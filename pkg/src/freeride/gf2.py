"""Bit-packed linear algebra over GF(2).

Vectors are plain ``uint8`` numpy arrays holding 0/1. Dense matrices pack each
row into little-endian ``uint64`` words (column ``j`` lives in word ``j // 64``,
bit ``j % 64``). Sparse matrices store per-row sorted column indices in CSR form.

Products follow the row-vector convention used for codes: ``vec_mat_mul(v, G)``
is ``vG`` and ``mat_vec_mul(H, v)`` is ``v Hᵀ`` (equivalently ``H vᵀ``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORD = 64


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix that is not full rank."""


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def as_bits(v) -> np.ndarray:
    """Coerce anything array-like (ints, bools, integral floats) to a 0/1 ``uint8`` array."""
    a = np.asarray(v)
    if a.dtype.kind not in "biu":
        a = a.astype(np.int64)
    return (a & 1).astype(np.uint8)


def pack_rows(a: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``(rows, nwords)`` uint64 words."""
    a = np.atleast_2d(as_bits(a))
    rows, cols = a.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = a & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, nw).astype(np.uint64)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    bits = np.unpackbits(words.view(np.uint8).reshape(rows, -1), axis=1, bitorder="little")
    return bits[:, :cols]


def weight(v: np.ndarray) -> int:
    """Hamming weight of a 0/1 vector or of packed words."""
    v = np.asarray(v)
    if v.dtype == np.uint64:
        return int(np.bitwise_count(v).sum())
    return int(np.count_nonzero(v))


@dataclass(frozen=True, eq=False)
class DenseBitMatrix:
    rows: int
    cols: int
    words: np.ndarray

    def __post_init__(self):
        if self.words.shape != (self.rows, _nwords(self.cols)):
            raise ValueError(f"word array shape {self.words.shape} does not fit {self.rows}x{self.cols}")
        self.words.setflags(write=False)

    @classmethod
    def from_array(cls, a) -> "DenseBitMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            a = a.reshape(-1 if a.size else 0, a.shape[-1] if a.ndim else 0)
        return cls(a.shape[0], a.shape[1], pack_rows(a) if a.shape[0] else np.zeros((0, _nwords(a.shape[1])), np.uint64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "DenseBitMatrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "DenseBitMatrix":
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_array(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return unpack_rows(self.words, self.cols)

    def row(self, i: int) -> np.ndarray:
        return unpack_rows(self.words[i : i + 1], self.cols)[0]

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def transpose(self) -> "DenseBitMatrix":
        return DenseBitMatrix.from_array(self.to_array().T)

    def rank(self) -> int:
        return row_reduce(self)[1]

    def __matmul__(self, other: "DenseBitMatrix") -> "DenseBitMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = np.zeros((self.rows, _nwords(other.cols)), dtype=np.uint64)
        a = self.to_array()
        for i in range(self.rows):
            sel = np.flatnonzero(a[i])
            if sel.size:
                out[i] = np.bitwise_xor.reduce(other.words[sel], axis=0)
        return DenseBitMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseBitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        return f"DenseBitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class SparseBitMatrix:
    """Row-wise sparse binary matrix (CSR layout, no values)."""

    rows: int
    cols: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        if self.indptr.shape != (self.rows + 1,):
            raise ValueError("indptr must have rows + 1 entries")
        for i in range(self.rows):
            seg = self.indices[self.indptr[i] : self.indptr[i + 1]]
            if seg.size and (np.any(np.diff(seg) <= 0) or seg[0] < 0 or seg[-1] >= self.cols):
                raise ValueError(f"row {i}: indices must be strictly increasing and < {self.cols}")
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_rows(cls, row_lists, cols: int) -> "SparseBitMatrix":
        row_lists = [np.sort(np.asarray(r, dtype=np.int64)) for r in row_lists]
        indptr = np.zeros(len(row_lists) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in row_lists])
        indices = np.concatenate(row_lists) if row_lists else np.zeros(0, np.int64)
        return cls(len(row_lists), cols, indptr, indices.astype(np.int64))

    @classmethod
    def from_array(cls, a) -> "SparseBitMatrix":
        a = as_bits(a)
        return cls.from_rows([np.flatnonzero(r) for r in a], a.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def row_weights(self) -> np.ndarray:
        return np.diff(self.indptr)

    def col_weights(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.cols)

    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry, aligned with ``indices``."""
        return np.repeat(np.arange(self.rows), self.row_weights())

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.uint8)
        a[self.row_ids(), self.indices] = 1
        return a

    def to_dense(self) -> DenseBitMatrix:
        return DenseBitMatrix.from_array(self.to_array())

    def padded_rows(self, fill: int) -> np.ndarray:
        """``(rows, max_row_weight)`` index table, short rows padded with ``fill``."""
        w = self.row_weights()
        width = int(w.max()) if self.rows else 0
        out = np.full((self.rows, width), fill, dtype=np.int64)
        pos = np.arange(self.nnz) - np.repeat(self.indptr[:-1], w)
        out[self.row_ids(), pos] = self.indices
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBitMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"SparseBitMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def mat_vec_mul(M: DenseBitMatrix | SparseBitMatrix, v) -> np.ndarray:
    """``v Mᵀ`` over GF(2); ``v`` may be a single vector or a batch of rows.

    For a parity-check matrix this is the syndrome.
    """
    v = as_bits(v)
    if v.shape[-1] != M.cols:
        raise ValueError(f"vector length {v.shape[-1]} != matrix cols {M.cols}")
    if isinstance(M, SparseBitMatrix):
        if M.rows == 0:
            return np.zeros(v.shape[:-1] + (0,), dtype=np.uint8)
        gathered = v[..., M.indices].astype(np.int64)
        # trailing zero so that empty rows at the end are valid reduceat offsets
        gathered = np.concatenate([gathered, np.zeros(v.shape[:-1] + (1,), np.int64)], axis=-1)
        acc = np.add.reduceat(gathered, M.indptr[:-1], axis=-1)
        acc[..., M.row_weights() == 0] = 0
        return (acc & 1).astype(np.uint8)
    vw = pack_rows(v.reshape(-1, M.cols))
    par = np.bitwise_count(M.words[None, :, :] & vw[:, None, :]).sum(axis=-1) & 1
    return par.astype(np.uint8).reshape(v.shape[:-1] + (M.rows,))


def vec_mat_mul(v, M: DenseBitMatrix) -> np.ndarray:
    """``v M`` over GF(2): XOR of the rows of ``M`` selected by ``v``."""
    v = as_bits(v)
    if v.shape[-1] != M.rows:
        raise ValueError(f"vector length {v.shape[-1]} != matrix rows {M.rows}")
    if v.ndim == 1:
        sel = np.flatnonzero(v)
        if sel.size == 0:
            return np.zeros(M.cols, dtype=np.uint8)
        acc = np.bitwise_xor.reduce(M.words[sel], axis=0)
        return unpack_rows(acc[None, :], M.cols)[0]
    flat = v.reshape(-1, M.rows)
    out = np.stack([vec_mat_mul(r, M) for r in flat]) if flat.shape[0] else np.zeros((0, M.cols), np.uint8)
    return out.reshape(v.shape[:-1] + (M.cols,))


def _eliminate(words: np.ndarray, cols: int, col_limit: int | None = None):
    """In-place Gauss-Jordan elimination on packed rows; returns pivot columns."""
    rows = words.shape[0]
    pivots: list[int] = []
    r = 0
    limit = cols if col_limit is None else col_limit
    for c in range(limit):
        if r == rows:
            break
        w, b = divmod(c, WORD)
        bit = np.uint64(1) << np.uint64(b)
        col = (words[r:, w] & bit) != 0
        hit = np.flatnonzero(col)
        if hit.size == 0:
            continue
        p = r + int(hit[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = (words[:, w] & bit) != 0
        mask[r] = False
        idx = np.flatnonzero(mask)
        if idx.size:
            # the pivot row is zero left of c, so words before w are untouched
            words[idx, w:] ^= words[r, w:]
        pivots.append(c)
        r += 1
    return pivots


def row_reduce(M: DenseBitMatrix) -> tuple[DenseBitMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and (strictly increasing) pivot columns."""
    words = M.words.copy()
    pivots = _eliminate(words, M.cols)
    return DenseBitMatrix(M.rows, M.cols, words), len(pivots), pivots


def rank(M: DenseBitMatrix | SparseBitMatrix) -> int:
    if isinstance(M, SparseBitMatrix):
        M = M.to_dense()
    return row_reduce(M)[1]


def invert(M: DenseBitMatrix) -> DenseBitMatrix:
    if M.rows != M.cols:
        raise ValueError(f"cannot invert non-square {M.shape} matrix")
    n = M.rows
    aug = np.hstack([M.to_array(), np.eye(n, dtype=np.uint8)])
    words = pack_rows(aug) if n else np.zeros((0, 1), np.uint64)
    pivots = _eliminate(words, 2 * n, col_limit=n)
    if len(pivots) != n:
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return DenseBitMatrix.from_array(unpack_rows(words, 2 * n)[:, n:])
