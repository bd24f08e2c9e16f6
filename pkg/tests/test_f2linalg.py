from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hochschild import bar_complex, builtin
from hochschild.f2linalg import (
    BitMatrix,
    Subspace,
    coo_rank,
    kernel_basis,
    rank,
    solve,
    subquotient_dim,
)


def naive_rank(dense) -> int:
    """Row reduction on Python integers used as bit rows (independent oracle)."""
    rows = [int("".join(str(int(x)) for x in r), 2) if len(r) else 0 for r in np.asarray(dense)]
    r = 0
    while rows:
        piv = max(rows)
        if piv == 0:
            break
        rows.remove(piv)
        top = piv.bit_length() - 1
        rows = [x ^ piv if (x >> top) & 1 else x for x in rows]
        r += 1
    return r


matrices = st.integers(0, 12).flatmap(
    lambda r: st.integers(0, 70).flatmap(
        lambda c: arrays(np.uint8, (r, c), elements=st.integers(0, 1))
    )
)


def test_rank_zero_matrix():
    assert rank(BitMatrix.zeros(5, 7)) == 0


def test_rank_identity():
    assert rank(BitMatrix.identity(3)) == 3


def test_kernel_zero_matrix():
    assert kernel_basis(BitMatrix.zeros(2, 4)).dim == 4


def test_kernel_identity():
    assert kernel_basis(BitMatrix.identity(3)).dim == 0


def _boundary_blocks(n):
    cx = bar_complex(builtin("exterior1"), "self", 2)
    return cx, [cx.matrix(n, k) for k in cx.keys(n)]


def test_boundary_rank_on_exterior_degree_two():
    cx, blocks = _boundary_blocks(2)
    assert sum(m.shape[1] for m in blocks) == 8
    assert sum(m.shape[0] for m in blocks) == 4
    assert sum(rank(m) for m in blocks) == 2
    assert sum(naive_rank(m.to_dense()) for m in blocks) == 2


def test_boundary_kernel_on_exterior_degree_one():
    cx, blocks = _boundary_blocks(1)
    # commutative algebra: a0[a1] -> a0 a1 + a1 a0 = 0
    assert all(m.is_zero() for m in blocks)
    assert sum(kernel_basis(m).dim for m in blocks) == 4


def test_subquotient_trivial_cases():
    u = Subspace.span(5, np.eye(5, dtype=np.uint8)[:3])
    assert subquotient_dim(u, u) == 0
    assert subquotient_dim(Subspace.full(5), Subspace.zero(5)) == 5


def test_subquotient_inclusion_exclusion():
    e = np.eye(5, dtype=np.uint8)
    u = Subspace.span(5, e[[0, 1, 2]])
    w = Subspace.span(5, np.array([e[0], e[3]]))
    assert u.intersection(w).dim == 1
    assert subquotient_dim(u, w) == 2


def test_bitmatrix_roundtrip_and_product():
    rng = np.random.default_rng(7)
    a = rng.integers(0, 2, (9, 130)).astype(np.uint8)
    b = rng.integers(0, 2, (130, 11)).astype(np.uint8)
    A, B = BitMatrix.from_dense(a), BitMatrix.from_dense(b)
    assert np.array_equal(A.to_dense(), a)
    assert np.array_equal((A @ B).to_dense(), (a.astype(int) @ b.astype(int)) % 2)
    assert np.array_equal(A.T.to_dense(), a.T)


def test_bitmatrix_is_immutable():
    m = BitMatrix.identity(2)
    with pytest.raises(AttributeError):
        m.rows = 3


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_naive(a):
    assert rank(BitMatrix.from_dense(a)) == naive_rank(a)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_nullity(a):
    m = BitMatrix.from_dense(a)
    k = kernel_basis(m)
    assert rank(m) + k.dim == a.shape[1]
    if k.dim:
        assert not ((a.astype(int) @ k.vectors().T.astype(int)) % 2).any()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_transpose_rank(a):
    m = BitMatrix.from_dense(a)
    assert rank(m) == rank(m.T)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_sparse_rank_agrees(a):
    r, c = np.nonzero(a)
    assert coo_rank(a.shape[0], a.shape[1], r, c) == rank(BitMatrix.from_dense(a))


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(0, 2**32 - 1))
def test_solve_finds_preimages(a, seed):
    if a.shape[1] == 0:
        return
    x = np.random.default_rng(seed).integers(0, 2, a.shape[1]).astype(np.uint8)
    b = (a.astype(int) @ x) % 2
    y = solve(BitMatrix.from_dense(a), b)
    assert y is not None
    assert np.array_equal((a.astype(int) @ y.astype(int)) % 2, b)


@settings(max_examples=100, deadline=None)
@given(matrices, matrices)
def test_subspace_dimension_formula(a, b):
    n = min(a.shape[1], b.shape[1])
    u = Subspace.span(n, a[:, :n])
    w = Subspace.span(n, b[:, :n])
    assert (u + w).dim + u.intersection(w).dim == u.dim + w.dim
    assert subquotient_dim(u, w) == u.dim - u.intersection(w).dim
