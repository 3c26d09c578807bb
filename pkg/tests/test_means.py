import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from realmono.errors import DimensionError, DomainError
from realmono.hermitian import is_hermitian, norm, random_pd, random_unitary, sample
from realmono.means import (
    MeanKind,
    agh_counterexample_search,
    agh_probe,
    geometric_mean,
    harmonic_mean,
    mean,
    verify_max_characterization,
)
from realmono.order import real_leq

from .conftest import seeds


def test_mean_examples():
    assert np.allclose(mean("geometric", np.eye(3), np.eye(3)), np.eye(3))
    assert np.allclose(mean(MeanKind.GEOMETRIC, [[4]], [[9]]), [[6]])
    assert np.allclose(mean("harmonic", [[4]], [[9]]), [[72 / 13]])
    assert np.allclose(mean("arithmetic", [[4]], [[9]]), [[6.5]])


def test_mean_errors():
    with pytest.raises(DomainError):
        geometric_mean(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(DomainError):
        harmonic_mean(np.zeros((1, 1)), np.eye(1))
    with pytest.raises(DimensionError):
        mean("arithmetic", np.eye(2), np.eye(3))


@given(st.floats(0.01, 100), st.floats(0.01, 100))
def test_scalar_consistency(a, b):
    assert geometric_mean([[a]], [[b]])[0, 0] == pytest.approx(np.sqrt(a * b), rel=1e-14)
    assert harmonic_mean([[a]], [[b]])[0, 0] == pytest.approx(2 * a * b / (a + b), rel=1e-14)
    assert mean("arithmetic", [[a]], [[b]])[0, 0] == pytest.approx((a + b) / 2, rel=1e-14)


@given(seeds, st.integers(1, 5))
def test_geometric_mean_hermitian_and_congruent(seed, n):
    rng = np.random.default_rng(seed)
    A, B = random_pd(rng, n), random_pd(rng, n)
    G = geometric_mean(A, B)
    assert is_hermitian(G, rtol=1e-10) and np.linalg.eigvalsh(G)[0] > 0
    U = random_unitary(rng, n)
    Uh = U.conj().T
    assert norm(Uh @ G @ U - geometric_mean(Uh @ A @ U, Uh @ B @ U)) <= 1e-9 * max(1, norm(G))
    assert verify_max_characterization(A, B, G).passed


def test_max_characterization_examples():
    r = verify_max_characterization(np.eye(2), np.eye(2), np.eye(2))
    assert r.feasible and r.feasibility_margin == pytest.approx(0, abs=1e-14) and r.maximal
    r = verify_max_characterization(np.diag([2, 1]), np.diag([1, 2]), np.sqrt(2) * np.eye(2))
    assert r.passed
    with pytest.raises(DomainError):
        verify_max_characterization(-np.eye(2), np.eye(2), np.eye(2))


def test_geomean_hermitian_monotone():
    for t in range(1000):
        A, B = sample("psd_pair_ordered", 1 + t % 3, 2, t)
        v = real_leq(geometric_mean(A[0], A[1]), geometric_mean(B[0], B[1]))
        assert v.holds, (t, v.margin)


def test_agh_examples():
    r = agh_probe(np.eye(2), np.eye(2))
    assert r.all_hold and r.worst_margin == pytest.approx(0, abs=1e-14)
    r = agh_probe([[1]], [[4]])
    assert r.harmonic[0, 0] == pytest.approx(1.6) and r.geometric[0, 0] == pytest.approx(2)
    assert r.arithmetic[0, 0] == pytest.approx(2.5) and r.all_hold


def test_agh_failure_on_real_positive_pairs():
    run, rep, worst = agh_counterexample_search(trials=10_000, seed=0)
    assert rep is not None and run <= 10_000 and worst < 0
    A = np.array([complex(*e) for e in rep.extra["A"]["data"]]).reshape(rep.extra["dim"], -1)
    assert rep.extra["dim"] in (1, 2) and A.shape[0] == rep.extra["dim"]


def test_agh_holds_on_hermitian_pairs():
    run, rep, _ = agh_counterexample_search(trials=500, seed=1, domain="hermitian_PD")
    assert rep is None and run == 500
