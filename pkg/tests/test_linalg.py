import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsim import ComplexMatrix, ComplexVector, ShapeError, identity, is_unitary, kronecker, matmul, matvec
from qsim.linalg import default_workers, row_chunks


def naive_product(a, b):
    """Textbook triple loop over Python complex numbers."""
    rows, inner, cols = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(rows)]


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def test_split_storage_is_row_major():
    m = ComplexMatrix.from_array([[1 + 2j, 3], [4j, 5 - 1j]])
    assert list(m.re) == [1, 3, 0, 5]
    assert list(m.im) == [2, 0, 4, -1]
    assert m[1, 0] == 4j
    with pytest.raises(IndexError):
        m[2, 0]


def test_storage_is_read_only():
    m = identity(2)
    with pytest.raises(ValueError):
        m.re[0] = 3.0


def test_shape_validation():
    with pytest.raises(ShapeError):
        ComplexMatrix(2, 2, np.zeros(3), np.zeros(4))
    with pytest.raises(ShapeError):
        ComplexMatrix(0, 2, np.zeros(0), np.zeros(0))
    with pytest.raises(ShapeError):
        ComplexVector(3, np.zeros(2), np.zeros(3))
    with pytest.raises(ShapeError):
        ComplexMatrix.from_array(np.zeros(4))


def test_matmul_matches_naive_oracle():
    rng = np.random.default_rng(1)
    a = random_matrix(rng, 7, 5)
    b = random_matrix(rng, 5, 3)
    expected = np.array(naive_product(a.tolist(), b.tolist()))
    for mode in ("serial", "parallel"):
        got = matmul(ComplexMatrix.from_array(a), ComplexMatrix.from_array(b), mode=mode).to_array()
        assert got.shape == (7, 3)
        assert np.max(np.abs(got - expected)) <= 1e-12


def test_matmul_rejects_mismatched_shapes():
    with pytest.raises(ShapeError):
        matmul(identity(2), identity(3))


def test_matmul_rejects_unknown_mode():
    with pytest.raises(ValueError):
        matmul(identity(2), identity(2), mode="gpu")


def test_matmul_rejects_nonpositive_workers():
    with pytest.raises(ValueError):
        matmul(identity(2), identity(2), mode="parallel", workers=0)


@pytest.mark.parametrize("workers", [1, 2, 3, 7, 16, 64])
def test_parallel_bit_identical_to_serial(workers):
    rng = np.random.default_rng(workers)
    a = ComplexMatrix.from_array(random_matrix(rng, 33, 17))
    b = ComplexMatrix.from_array(random_matrix(rng, 17, 9))
    s = matmul(a, b)
    p = matmul(a, b, mode="parallel", workers=workers)
    assert np.array_equal(s.re, p.re) and np.array_equal(s.im, p.im)


def test_row_chunks_cover_rows_contiguously():
    assert row_chunks(10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert row_chunks(2, 8) == [(0, 1), (1, 2)]
    assert row_chunks(5, 1) == [(0, 5)]


def test_default_workers_env(monkeypatch):
    monkeypatch.setenv("QSIM_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("QSIM_THREADS", "zero")
    with pytest.raises(ValueError):
        default_workers()
    monkeypatch.setenv("QSIM_THREADS", "0")
    with pytest.raises(ValueError):
        default_workers()
    monkeypatch.delenv("QSIM_THREADS")
    assert default_workers() >= 1


def test_matvec():
    rng = np.random.default_rng(2)
    a = random_matrix(rng, 6, 4)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    got = matvec(ComplexMatrix.from_array(a), ComplexVector.from_array(v)).to_array()
    assert np.max(np.abs(got - a @ v)) <= 1e-12
    with pytest.raises(ShapeError):
        matvec(identity(3), ComplexVector.from_array(v))


def test_kronecker_block_structure():
    rng = np.random.default_rng(3)
    a = random_matrix(rng, 2, 3)
    b = random_matrix(rng, 4, 2)
    k = kronecker(ComplexMatrix.from_array(a), ComplexMatrix.from_array(b)).to_array()
    assert k.shape == (8, 6)
    for i in range(2):
        for j in range(3):
            block = k[4 * i:4 * i + 4, 2 * j:2 * j + 2]
            assert np.max(np.abs(block - a[i, j] * b)) <= 1e-14


def test_is_unitary():
    s = 1 / np.sqrt(2)
    assert is_unitary(ComplexMatrix.from_array([[s, s], [s, -s]]))
    assert not is_unitary(ComplexMatrix.from_array([[1, 1], [0, 1]]))
    with pytest.raises(ShapeError):
        is_unitary(ComplexMatrix.zeros(2, 3))


def test_adjoint_and_identity():
    m = ComplexMatrix.from_array([[1 + 1j, 2], [3j, 4]])
    assert np.array_equal(m.adjoint().to_array(), m.to_array().conj().T)
    assert matmul(identity(2), m).max_abs_diff(m) == 0.0


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


@settings(max_examples=40, deadline=None)
@given(seeds, dims, dims, dims, dims)
def test_matmul_associative(seed, p, q, r, s):
    rng = np.random.default_rng(seed)
    a, b, c = (ComplexMatrix.from_array(random_matrix(rng, x, y)) for x, y in ((p, q), (q, r), (r, s)))
    left = matmul(matmul(a, b), c)
    right = matmul(a, matmul(b, c))
    assert left.max_abs_diff(right) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_kronecker_mixed_product(seed, p, q):
    rng = np.random.default_rng(seed)
    a, c = (ComplexMatrix.from_array(random_matrix(rng, p, p)) for _ in range(2))
    b, d = (ComplexMatrix.from_array(random_matrix(rng, q, q)) for _ in range(2))
    left = matmul(kronecker(a, b), kronecker(c, d))
    right = kronecker(matmul(a, c), matmul(b, d))
    assert left.max_abs_diff(right) <= 1e-10
