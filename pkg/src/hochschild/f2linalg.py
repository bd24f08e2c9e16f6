"""Exact linear algebra over the two-element field.

Dense matrices are bit-packed into 64-bit words, row-major, with column j of a
row stored in bit ``j % 64`` of word ``j // 64``.  Large sparse operators are
never materialized densely: their ranks are computed by an incremental,
fully reduced echelon kernel over sparse input vectors (``sparse_echelon``).

Pivots are always the lowest column index, so every result is reproducible.
"""

from __future__ import annotations

import numpy as np
import numba as nb

__all__ = [
    "BitMatrix",
    "Subspace",
    "rank",
    "kernel_basis",
    "subquotient_dim",
    "solve",
    "sparse_echelon",
    "sparse_rank",
    "coo_rank",
]

_ONE = np.uint64(1)


def _nwords(cols: int) -> int:
    return (cols + 63) // 64


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array of shape (rows, cols) into uint64 words."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(rows, nw)


def _unpack(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(data.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


class BitMatrix:
    """Immutable bit-packed matrix over F2."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        nw = _nwords(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        data = np.array(data, dtype=np.uint64, copy=True).reshape(rows, nw)
        if cols % 64 and rows:
            mask = np.uint64((1 << (cols % 64)) - 1)
            if np.any(data[:, -1] & ~mask):
                raise ValueError("bits set beyond the column count")
        data.flags.writeable = False
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.atleast_2d(np.asarray(dense, dtype=np.int64)) & 1
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(dense.shape[0], dense.shape[1], _pack(dense))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator, density: float = 0.5) -> "BitMatrix":
        return cls.from_dense((rng.random((rows, cols)) < density).astype(np.uint8))

    @classmethod
    def from_coo(cls, rows: int, cols: int, r: np.ndarray, c: np.ndarray) -> "BitMatrix":
        """Matrix with entry (r[k], c[k]) toggled for every k."""
        dense = np.zeros((rows, cols), dtype=np.uint8)
        np.bitwise_xor.at(dense, (np.asarray(r, dtype=np.int64), np.asarray(c, dtype=np.int64)), 1)
        return cls.from_dense(dense)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data, self.cols)

    def row(self, i: int) -> np.ndarray:
        return self.to_dense()[i]

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        prod = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
        return BitMatrix.from_dense(prod & 1)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self.rows, self.cols, self.data ^ other.data)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@nb.njit(cache=True)
def _rref_packed(data, cols):
    """Fully reduced row echelon form in place; returns the pivot columns."""
    rows, nw = data.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        w = c >> 6
        m = np.uint64(1) << np.uint64(c & 63)
        sel = -1
        for i in range(r, rows):
            if data[i, w] & m:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for k in range(nw):
                tmp = data[r, k]
                data[r, k] = data[sel, k]
                data[sel, k] = tmp
        for i in range(rows):
            if i != r and (data[i, w] & m):
                for k in range(w, nw):
                    data[i, k] ^= data[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


def _rref(m: BitMatrix) -> tuple[np.ndarray, np.ndarray]:
    data = np.array(m.data, dtype=np.uint64, copy=True)
    piv = _rref_packed(data, m.cols)
    return data[: len(piv)], piv


def rank(m: BitMatrix) -> int:
    """Rank over F2."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(len(_rref(m)[1]))


class Subspace:
    """A subspace of F2^n stored by its reduced row echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: BitMatrix, pivots: np.ndarray):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        pivots = np.array(pivots, dtype=np.int64)
        pivots.flags.writeable = False
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, ambient_dim: int, vectors) -> "Subspace":
        """Span of the rows of ``vectors`` (dense 0/1 array or BitMatrix)."""
        if isinstance(vectors, BitMatrix):
            m = vectors
        elif ambient_dim == 0:
            return cls.zero(0)
        else:
            arr = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
            m = BitMatrix.from_dense(arr)
        if m.cols != ambient_dim:
            raise ValueError("vector length differs from the ambient dimension")
        if m.rows == 0:
            return cls.zero(ambient_dim)
        data, piv = _rref(m)
        return cls(ambient_dim, BitMatrix(len(piv), ambient_dim, data), piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, BitMatrix(0, n), np.zeros(0, dtype=np.int64))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, BitMatrix.identity(n), np.arange(n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> np.ndarray:
        return self.basis.to_dense()

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def reduce(self, v) -> np.ndarray:
        """Residue of v modulo the subspace (zero iff v lies in it)."""
        v = np.array(v, dtype=np.uint8).reshape(self.ambient_dim) & 1
        if self.dim:
            rows = self.vectors()
            for i, p in enumerate(self.pivots):
                if v[p]:
                    v ^= rows[i]
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.ambient_dim, self.basis.vstack(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        """Intersection via the Zassenhaus stacking [u | u], [w | 0]."""
        self._check(other)
        n = self.ambient_dim
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(n)
        u = self.vectors()
        w = other.vectors()
        top = np.hstack([u, u])
        bot = np.hstack([w, np.zeros_like(w)])
        red = Subspace.span(2 * n, np.vstack([top, bot]))
        rows = red.vectors()
        keep = rows[red.pivots >= n][:, n:]
        return Subspace.span(n, keep)

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.vectors())

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: BitMatrix) -> Subspace:
    """Null space {x : m x = 0} as a subspace of F2^cols."""
    n = m.cols
    if m.rows == 0:
        return Subspace.full(n)
    data, piv = _rref(m)
    rows = _unpack(data, n)
    free = np.setdiff1d(np.arange(n), piv)
    vecs = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        vecs[k, piv] = rows[:, f]
    ker = Subspace.span(n, vecs)
    assert ker.dim == n - len(piv)
    return ker


def subquotient_dim(u: Subspace, w: Subspace) -> int:
    """dim (U + W) / W."""
    u._check(w)
    return (u + w).dim - w.dim


def solve(m: BitMatrix, b) -> np.ndarray | None:
    """One solution x of m x = b, or None if the system is inconsistent."""
    b = np.asarray(b, dtype=np.uint8).reshape(m.rows) & 1
    aug = np.hstack([m.to_dense(), b[:, None]])
    data, piv = _rref(BitMatrix.from_dense(aug))
    if len(piv) and piv[-1] == m.cols:
        return None
    rows = _unpack(data, m.cols + 1)
    x = np.zeros(m.cols, dtype=np.uint8)
    x[piv] = rows[:, m.cols]
    return x


@nb.njit(cache=True)
def sparse_echelon(ptr, idx, ncoords):
    """Incremental fully reduced echelon form of sparse vectors.

    Vector v has support ``idx[ptr[v]:ptr[v+1]]`` (repeated coordinates cancel).
    Vectors are inserted in order; each independent vector creates one pivot,
    the lowest coordinate of its reduced form.  Returns, per pivot, the
    coordinate and the index of the vector that created it.  Because the
    basis is kept fully reduced, the pivots created by the first k vectors
    are the echelon pivots of their span, and the number of pivots below a
    coordinate bound is the rank of the projection onto that prefix.
    """
    nw = (ncoords + 63) >> 6
    nvec = ptr.shape[0] - 1
    cap = min(ncoords, nvec)
    rows = np.zeros((max(cap, 1), max(nw, 1)), dtype=np.uint64)
    pivrow = -np.ones(max(ncoords, 1), dtype=np.int64)
    piv_coord = np.empty(max(cap, 1), dtype=np.int64)
    piv_vec = np.empty(max(cap, 1), dtype=np.int64)
    par = np.zeros(max(ncoords, 1), dtype=np.uint8)
    t = np.zeros(max(nw, 1), dtype=np.uint64)
    r = 0
    for v in range(nvec):
        if r == ncoords:
            break
        for q in range(ptr[v], ptr[v + 1]):
            par[idx[q]] ^= 1
        for w in range(nw):
            t[w] = 0
        for q in range(ptr[v], ptr[v + 1]):
            j = idx[q]
            if par[j]:
                par[j] = 0
                t[j >> 6] ^= np.uint64(1) << np.uint64(j & 63)
                pr = pivrow[j]
                if pr >= 0:
                    for w in range(nw):
                        t[w] ^= rows[pr, w]
        p = -1
        for w in range(nw):
            x = t[w]
            if x != 0:
                b = 0
                while (x >> np.uint64(b)) & np.uint64(1) == 0:
                    b += 1
                p = w * 64 + b
                break
        if p < 0:
            continue
        pw = p >> 6
        pm = np.uint64(1) << np.uint64(p & 63)
        for k in range(r):
            if rows[k, pw] & pm:
                for w in range(pw, nw):
                    rows[k, w] ^= t[w]
        for w in range(nw):
            rows[r, w] = t[w]
        pivrow[p] = r
        piv_coord[r] = p
        piv_vec[r] = v
        r += 1
    return piv_coord[:r].copy(), piv_vec[:r].copy()


def _csr(keys: np.ndarray, vals: np.ndarray, nkeys: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    ptr = np.zeros(nkeys + 1, dtype=np.int64)
    np.add.at(ptr, keys + 1, 1)
    return np.cumsum(ptr), np.ascontiguousarray(vals[order], dtype=np.int64)


def sparse_rank(ptr: np.ndarray, idx: np.ndarray, ncoords: int) -> int:
    """Rank of the span of sparse vectors."""
    if ncoords == 0 or len(ptr) <= 1:
        return 0
    return int(len(sparse_echelon(np.asarray(ptr, np.int64), np.asarray(idx, np.int64), ncoords)[0]))


def coo_rank(nrows: int, ncols: int, r: np.ndarray, c: np.ndarray) -> int:
    """Rank of the matrix with entries (r[k], c[k]) (duplicates cancel).

    Vectors are taken along the larger side so the echelon rows live in the
    smaller space.
    """
    if nrows == 0 or ncols == 0 or len(r) == 0:
        return 0
    r = np.asarray(r, np.int64)
    c = np.asarray(c, np.int64)
    if ncols >= nrows:
        ptr, idx = _csr(c, r, ncols)
        return sparse_rank(ptr, idx, nrows)
    ptr, idx = _csr(r, c, nrows)
    return sparse_rank(ptr, idx, ncols)
