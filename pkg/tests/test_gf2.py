import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from freeride.gf2 import (
    DenseBitMatrix,
    SingularMatrixError,
    SparseBitMatrix,
    invert,
    mat_vec_mul,
    pack_rows,
    rank,
    row_reduce,
    unpack_rows,
    vec_mat_mul,
    weight,
)

import oracles


def bit_arrays(rows, cols):
    return arrays(np.uint8, (rows, cols), elements=st.integers(0, 1))


@st.composite
def matrix_and_vectors(draw, max_rows=12, max_cols=150):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    M = draw(bit_arrays(r, c))
    v = draw(arrays(np.uint8, c, elements=st.integers(0, 1)))
    w = draw(arrays(np.uint8, c, elements=st.integers(0, 1)))
    return M, v, w


# ---- packing


@given(st.integers(0, 6), st.integers(0, 200), st.data())
def test_pack_unpack_roundtrip(rows, cols, data):
    a = data.draw(bit_arrays(rows, cols))
    assert np.array_equal(unpack_rows(pack_rows(a), cols), a)
    assert DenseBitMatrix.from_array(a).to_array().shape == (rows, cols)


@given(arrays(np.uint8, st.integers(0, 300), elements=st.integers(0, 1)))
def test_weight_packed_and_unpacked_agree(v):
    assert weight(v) == int(v.sum())
    assert weight(pack_rows(v[None, :])) == int(v.sum())


def test_get_and_row_accessors_respect_bounds(rng):
    a = rng.integers(0, 2, (5, 70), dtype=np.uint8)
    M = DenseBitMatrix.from_array(a)
    assert all(M.get(i, j) == a[i, j] for i in range(5) for j in range(70))
    assert np.array_equal(M.row(3), a[3])
    with pytest.raises(IndexError):
        M.get(5, 0)
    with pytest.raises(IndexError):
        M.get(0, 70)


def test_sparse_validation():
    with pytest.raises(ValueError):
        SparseBitMatrix(1, 4, np.array([0, 2]), np.array([2, 1]))
    with pytest.raises(ValueError):
        SparseBitMatrix(1, 4, np.array([0, 1]), np.array([4]))
    H = SparseBitMatrix.from_rows([[3, 0], [], [1, 2, 3]], 4)
    assert np.array_equal(H.row(0), [0, 3])
    assert np.array_equal(H.row_weights(), [2, 0, 3])
    assert np.array_equal(H.col_weights(), [1, 1, 1, 2])
    assert SparseBitMatrix.from_array(H.to_array()) == H


# ---- mat_vec_mul


def test_zero_vector_and_identity():
    M = DenseBitMatrix.from_array(np.random.default_rng(0).integers(0, 2, (7, 9)))
    assert not mat_vec_mul(M, np.zeros(9, np.uint8)).any()
    v = np.random.default_rng(1).integers(0, 2, 9, dtype=np.uint8)
    assert np.array_equal(mat_vec_mul(DenseBitMatrix.identity(9), v), v)
    assert np.array_equal(mat_vec_mul(SparseBitMatrix.from_array(np.eye(9)), v), v)


def test_random_8x8_against_loop_oracle():
    rng = np.random.default_rng(8)
    for _ in range(50):
        a = rng.integers(0, 2, (8, 8), dtype=np.uint8)
        v = rng.integers(0, 2, 8, dtype=np.uint8)
        expect = oracles.matvec(a, v)
        assert np.array_equal(mat_vec_mul(DenseBitMatrix.from_array(a), v), expect)
        assert np.array_equal(mat_vec_mul(SparseBitMatrix.from_array(a), v), expect)
        assert np.array_equal(vec_mat_mul(v, DenseBitMatrix.from_array(a)), oracles.vecmat(v, a))


def test_dimension_mismatch_raises():
    M = DenseBitMatrix.zeros(3, 5)
    with pytest.raises(ValueError):
        mat_vec_mul(M, np.zeros(4, np.uint8))
    with pytest.raises(ValueError):
        mat_vec_mul(SparseBitMatrix.from_array(np.ones((3, 5))), np.zeros(6, np.uint8))
    with pytest.raises(ValueError):
        vec_mat_mul(np.zeros(5, np.uint8), M)


@given(matrix_and_vectors())
def test_mat_vec_mul_is_linear(mvw):
    M, v, w = mvw
    for mat in (DenseBitMatrix.from_array(M), SparseBitMatrix.from_array(M)):
        assert np.array_equal(mat_vec_mul(mat, v ^ w), mat_vec_mul(mat, v) ^ mat_vec_mul(mat, w))


@given(matrix_and_vectors())
def test_batched_products_match_single(mvw):
    M, v, w = mvw
    D = DenseBitMatrix.from_array(M)
    batch = np.stack([v, w])
    assert np.array_equal(mat_vec_mul(D, batch), np.stack([mat_vec_mul(D, v), mat_vec_mul(D, w)]))
    S = SparseBitMatrix.from_array(M)
    assert np.array_equal(mat_vec_mul(S, batch), mat_vec_mul(D, batch))
    u = batch[:, : M.shape[0]] if M.shape[1] >= M.shape[0] else None
    if u is not None:
        assert np.array_equal(vec_mat_mul(u, D), np.stack([oracles.vecmat(r, M) for r in u]))


@given(st.integers(1, 70), st.integers(1, 70), st.integers(1, 70), st.data())
def test_matmul_matches_integer_product(a_rows, inner, b_cols, data):
    A = data.draw(bit_arrays(a_rows, inner))
    B = data.draw(bit_arrays(inner, b_cols))
    C = DenseBitMatrix.from_array(A) @ DenseBitMatrix.from_array(B)
    assert np.array_equal(C.to_array(), (A.astype(int) @ B.astype(int)) % 2)
    assert np.array_equal(DenseBitMatrix.from_array(A).transpose().to_array(), A.T)


# ---- row_reduce / rank


def test_row_reduce_identity_and_zero():
    R, r, piv = row_reduce(DenseBitMatrix.identity(6))
    assert r == 6 and piv == list(range(6))
    R, r, piv = row_reduce(DenseBitMatrix.zeros(4, 7))
    assert r == 0 and piv == []


def test_duplicated_rows_rank_matches_span_enumeration():
    a = np.array(
        [
            [1, 0, 1, 1, 0, 0],
            [0, 1, 1, 0, 1, 0],
            [1, 0, 1, 1, 0, 0],
            [1, 1, 0, 1, 1, 0],
        ],
        dtype=np.uint8,
    )
    assert len(oracles.span(a)) == 2 ** rank(DenseBitMatrix.from_array(a))
    assert rank(DenseBitMatrix.from_array(a)) == 2


@settings(max_examples=150)
@given(st.integers(1, 7), st.integers(1, 10), st.data())
def test_row_reduce_properties(rows, cols, data):
    a = data.draw(bit_arrays(rows, cols))
    R, r, piv = row_reduce(DenseBitMatrix.from_array(a))
    Ra = R.to_array()
    assert r == len(piv) == oracles.rank_by_span(a)
    assert all(p < q for p, q in zip(piv, piv[1:]))
    # reduced echelon: each pivot column is a unit vector, zero rows at the bottom
    for i, p in enumerate(piv):
        col = Ra[:, p]
        assert col[i] == 1 and col.sum() == 1
        assert not Ra[i, :p].any()
    assert not Ra[r:].any()
    # same row space
    assert oracles.span(Ra[:r] if r else np.zeros((0, cols), np.uint8)) == oracles.span(a)


def test_rank_of_sparse_matches_dense(rng):
    a = rng.integers(0, 2, (20, 30), dtype=np.uint8)
    assert rank(SparseBitMatrix.from_array(a)) == rank(DenseBitMatrix.from_array(a))


def test_row_reduce_wide_matrix_across_words(rng):
    a = rng.integers(0, 2, (40, 300), dtype=np.uint8)
    a[20:] = a[:20] ^ a[np.arange(20) // 2]  # rows 20.. dependent on 0..19
    R, r, piv = row_reduce(DenseBitMatrix.from_array(a))
    assert r == rank(DenseBitMatrix.from_array(a[:20])) == 20
    assert np.array_equal(mat_vec_mul(DenseBitMatrix.from_array(R.to_array()[:r]), np.zeros(300, np.uint8)), np.zeros(r))


# ---- invert


def test_invert_identity_and_permutation(rng):
    I = DenseBitMatrix.identity(11)
    assert invert(I) == I
    P = np.eye(11, dtype=np.uint8)[rng.permutation(11)]
    assert np.array_equal(invert(DenseBitMatrix.from_array(P)).to_array(), P.T)


def test_invert_random_full_rank_10x10(rng):
    found = 0
    while found < 20:
        a = rng.integers(0, 2, (10, 10), dtype=np.uint8)
        M = DenseBitMatrix.from_array(a)
        if rank(M) < 10:
            with pytest.raises(SingularMatrixError):
                invert(M)
            continue
        found += 1
        assert M @ invert(M) == DenseBitMatrix.identity(10)
        assert invert(M) @ M == DenseBitMatrix.identity(10)


def test_invert_rejects_non_square():
    with pytest.raises(ValueError):
        invert(DenseBitMatrix.zeros(2, 3))


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_invert_exhaustive_small_dims(dim):
    eye = DenseBitMatrix.identity(dim)
    invertible = 0
    for bits in itertools.product((0, 1), repeat=dim * dim):
        a = np.array(bits, dtype=np.uint8).reshape(dim, dim)
        M = DenseBitMatrix.from_array(a)
        if oracles.det_parity(a):
            invertible += 1
            assert M @ invert(M) == eye
        else:
            with pytest.raises(SingularMatrixError):
                invert(M)
    # |GL(dim, 2)|
    expect = np.prod([2**dim - 2**i for i in range(dim)])
    assert invertible == expect
