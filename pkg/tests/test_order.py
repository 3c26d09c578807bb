import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from realmono.errors import DimensionError
from realmono.hermitian import re_part
from realmono.order import in_P_re, is_real_positive, real_leq, sample_ordered_pair

from .conftest import dims, seeds


def test_is_real_positive_examples():
    v = is_real_positive(np.eye(2))
    assert v.holds and v.margin == pytest.approx(1)
    v = is_real_positive([[1j]])
    assert v.holds and v.margin == 0
    v = is_real_positive([[-1 + 5j]])
    assert not v.holds and v.margin == pytest.approx(-1)


def test_in_p_re_examples():
    assert in_P_re(np.stack([np.eye(2)] * 3))
    assert not in_P_re([[[1]], [[1j]]])
    assert in_P_re([[[0.1]]], tol=1e-8)


def test_real_leq_examples():
    A = np.array([[[1, 2j], [0, 3]]])
    v = real_leq(A, A)
    assert v.holds and v.margin == 0
    v = real_leq(np.zeros((1, 2, 2)), np.eye(2)[None])
    assert v.holds and v.margin == pytest.approx(1)
    # only a preorder: equal real parts compare both ways
    assert real_leq([[[1]]], [[[1 + 1j]]]).holds and real_leq([[[1 + 1j]]], [[[1]]]).holds


def test_real_leq_shape_mismatch():
    with pytest.raises(DimensionError):
        real_leq(np.eye(2)[None], np.eye(3)[None])


def test_witness_vector_realises_margin():
    A = np.array([[[2, 0], [0, 0]]], dtype=complex)
    B = np.array([[[1, 0.5], [0.5, 1]]], dtype=complex)
    v = real_leq(A, B)
    assert not v.holds
    w = v.witness_vector
    D = re_part(B[0] - A[0])
    assert np.vdot(w, D @ w).real == pytest.approx(v.margin, abs=1e-9)


@given(seeds, dims, st.integers(1, 3))
def test_sample_ordered_pair(seed, n, k):
    A, B = sample_ordered_pair(n, k, seed)
    v = real_leq(A, B)
    assert v.holds and v.margin >= 0
    assert in_P_re(A) and in_P_re(B)
    A2, B2 = sample_ordered_pair(n, k, seed)
    assert np.array_equal(A, A2) and np.array_equal(B, B2)


@given(seeds, dims)
def test_transitivity(seed, n):
    A, B = sample_ordered_pair(n, 1, seed)
    _, C = sample_ordered_pair(n, 1, seed + 1)
    C = B + (C - sample_ordered_pair(n, 1, seed + 1)[0])
    assert real_leq(A, B).margin >= 0 and real_leq(B, C).margin >= 0
    assert real_leq(A, C).margin >= -1e-12


@given(seeds, dims, st.floats(0, 10))
def test_shift_property(seed, n, eps):
    A, _ = sample_ordered_pair(n, 2, seed)
    v = real_leq(A, A + eps * np.eye(n))
    assert v.holds and v.margin == pytest.approx(eps, abs=1e-12)


def test_verdict_json():
    out = real_leq([[[2]]], [[[1]]]).to_json()
    assert out["holds"] is False and out["margin"] == pytest.approx(-1) and "witness_vector" in out
