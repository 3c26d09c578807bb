import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from realmono.errors import ArityError, ConfigurationError, DimensionError, DomainError, HermitianityError
from realmono.hermitian import (
    as_tuple,
    direct_sum,
    im_part,
    is_psd,
    matrix_from_json,
    matrix_to_json,
    norm,
    random_psd_increment,
    random_unitary,
    re_part,
    sample,
    sqrt_psd,
    sqrtm_principal,
    tuple_from_json,
    tuple_to_json,
)

from .conftest import dims, seeds


def test_re_part_examples():
    assert np.allclose(re_part([[1j]]), [[0]])
    H = np.array([[2, 1 - 1j], [1 + 1j, 3]])
    assert np.array_equal(re_part(H), H)
    X = np.array([[1 + 2j, 3], [-1, 4]])
    assert np.allclose(re_part(X), [[1, 1], [1, 4]])


def test_im_part_examples():
    assert np.allclose(im_part([[1j]]), [[1]])
    assert np.allclose(im_part(np.array([[2, 1j], [-1j, 3]])), 0)
    assert np.allclose(im_part([[1 + 2j]]), [[2]])


def test_non_square_rejected():
    with pytest.raises(DimensionError):
        re_part(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        im_part(np.ones((3, 2)))


@given(seeds, dims)
def test_re_im_decomposition(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert np.max(np.abs(re_part(X) + 1j * im_part(X) - X)) <= 1e-14 * max(1.0, norm(X))


def test_is_psd_examples():
    assert is_psd(np.eye(3), 0) == (True, 1.0)
    ok, m = is_psd([[-1]], 1e-8)
    assert not ok and m == pytest.approx(-1)
    ok, m = is_psd([[2, 1], [1, 2]])
    assert ok and m == pytest.approx(1)


def test_is_psd_rejects_non_hermitian():
    with pytest.raises(HermitianityError):
        is_psd([[1, 2], [0, 1]])


@given(seeds, dims)
def test_is_psd_unitarily_stable(seed, n):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = (G + G.conj().T) / 2
    U = random_unitary(rng, n)
    assert is_psd(U.conj().T @ H @ U)[1] == pytest.approx(is_psd(H)[1], abs=1e-10)


def test_sqrt_psd_examples():
    assert np.allclose(sqrt_psd(np.eye(2)), np.eye(2))
    assert np.allclose(sqrt_psd([[4]]), [[2]])
    assert np.allclose(sqrt_psd(np.diag([4, 9])), np.diag([2, 3]))
    with pytest.raises(DomainError):
        sqrt_psd([[-1]])


def test_sqrt_psd_many_samples():
    rng = np.random.default_rng(0)
    for t in range(1000):
        n = 1 + t % 8
        H = random_psd_increment(rng, n)
        R = sqrt_psd(H)
        assert is_psd(R)[0]
        assert np.linalg.norm(R @ R - H) <= 1e-10 * max(np.linalg.norm(H), 1e-300) + 1e-15


@given(seeds, st.integers(2, 8))
def test_sqrtm_principal_squares_back(seed, n):
    X = sample("real_positive", n, 1, seed)[0]
    R = sqrtm_principal(X)
    assert norm(R @ R - X) <= 1e-10 * norm(X)
    # principal branch: spectrum in the open right half-plane
    assert np.all(np.linalg.eigvals(R).real > 0)


def test_sqrtm_principal_negative_axis():
    with pytest.raises(DomainError):
        sqrtm_principal(np.diag([1.0, -2.0]))
    with pytest.raises(DomainError):
        sqrtm_principal([[-4.0]])


def test_direct_sum_examples():
    assert np.array_equal(direct_sum([[[1]]], [[[2]]])[0], np.diag([1, 2]))
    A = np.array([[[1, 2], [3, 4]]])
    S = direct_sum(A, np.zeros((1, 1, 1)))[0]
    assert np.array_equal(S[:2, :2], A[0]) and not S[2].any() and not S[:, 2].any()
    S = direct_sum([[[1]], [[2]]], [[[3]], [[4]]])
    assert S.shape == (2, 2, 2) and np.array_equal(S[1], np.diag([2, 4]))
    with pytest.raises(ArityError):
        direct_sum([[[1]]], [[[1]], [[2]]])


@given(seeds, dims, dims)
def test_direct_sum_spectrum(seed, n, m):
    A = sample("hermitian", n, 1, seed)
    B = sample("hermitian", m, 1, seed + 1)
    w = np.linalg.eigvalsh(direct_sum(A, B)[0])
    both = np.sort(np.concatenate([np.linalg.eigvalsh(A[0]), np.linalg.eigvalsh(B[0])]))
    assert np.allclose(w, both, atol=1e-9)


@given(seeds, dims, st.integers(1, 3))
def test_sample_contracts(seed, n, k):
    X = sample("real_positive", n, k, seed)
    for x in X:
        assert np.linalg.eigvalsh(re_part(x))[0] >= 0.1 - 1e-10
    U = sample("unitary", n, k, seed)
    for u in U:
        assert norm(u.conj().T @ u - np.eye(n)) <= 1e-10
    V = sample("isometry", n, k, seed)
    m = V.shape[2]
    assert m <= n and norm(V[0].conj().T @ V[0] - np.eye(m)) <= 1e-10
    A, B = sample("psd_pair_ordered", n, k, seed)
    for a, b in zip(A, B):
        assert np.linalg.eigvalsh(re_part(b - a))[0] >= 0
    for kind in ("hermitian", "unitary", "isometry", "real_positive", "psd_pair_ordered"):
        assert np.array_equal(sample(kind, n, k, seed), sample(kind, n, k, seed))


def test_sample_invalid_kind():
    with pytest.raises(ConfigurationError):
        sample("orthogonal", 2, 1, 0)


@given(seeds, dims)
def test_json_round_trip(seed, n):
    X = sample("real_positive", n, 2, seed)
    assert np.array_equal(matrix_from_json(matrix_to_json(X[0])), X[0])
    assert np.array_equal(tuple_from_json(tuple_to_json(X)), X)
    assert matrix_to_json(np.eye(1))["data"] == [[1.0, 0.0]]


def test_as_tuple_uniform():
    with pytest.raises(DimensionError):
        as_tuple([np.eye(2), np.eye(3)])
