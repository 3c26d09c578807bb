import numpy as np
import pytest

from realmono import expr as ex
from realmono import zoo
from realmono.certifiers import certify_concave
from realmono.errors import DimensionError
from realmono.free import FreeFunctionSpec, evaluate
from realmono.hermitian import sample
from realmono.hypograph import (
    MAX_DIM,
    GradedPoint,
    check_matrix_convexity,
    concavity_to_hypograph_witness,
    contraction_applicable,
    direct_sum_points,
    hypo_member,
    sat_member,
)


def test_hypo_member_examples():
    F = zoo.spec("cube")
    X = sample("real_positive", 2, 1, 0)
    FX = evaluate(F, X)
    I = np.eye(2)
    v = hypo_member(F, GradedPoint(FX, X))
    assert v.holds and v.margin == pytest.approx(0, abs=1e-12)
    v = hypo_member(F, GradedPoint(FX - I, X))
    assert v.holds and v.margin == pytest.approx(1)
    v = hypo_member(F, GradedPoint(FX + I, X))
    assert not v.holds and v.margin == pytest.approx(-1)


def test_graded_point_shapes():
    with pytest.raises(DimensionError):
        GradedPoint(np.eye(2), np.eye(3)[None])
    p = GradedPoint(np.eye(2), np.eye(2)[None])
    q = GradedPoint(np.eye(1), np.eye(1)[None])
    assert direct_sum_points(p, q).dim == 3


def test_sat_member_examples():
    I = np.eye(2)
    assert sat_member([I], np.zeros((2, 2)))
    assert not sat_member([np.zeros((2, 2))], I)
    assert sat_member([1j * I], -I + 1j * I)
    with pytest.raises(DimensionError):
        sat_member([np.eye(3)], I)


def test_affine_hypograph_convex():
    rep = check_matrix_convexity(zoo.spec("affine-pos"), trials=200, seed=0)
    assert not rep.violated
    assert "contraction" in rep.details["subtests"]
    assert all(m is not None and m >= -1e-10 for m in rep.details["subtest_worst"].values())


def test_square_violates_convex_subtest():
    sq = FreeFunctionSpec(ex.var(1) ** 2, 1, "hermitian_PD", "square-hpd")
    rep = check_matrix_convexity(sq, trials=300, seed=0)
    assert rep.violated and rep.witness["subtest"] in ("convex", "isometry", "reducing")
    conc = certify_concave(sq, trials=300, seed=0)
    assert conc.violated


def test_neg_re_inverse_convex():
    rep = check_matrix_convexity(zoo.spec("neg-re-inverse"), trials=1000, seed=1)
    assert not rep.violated
    assert rep.details["dimension_coverage"] == [1, 2, 3, 4, 6]


def test_concavity_witness_converts():
    sq = FreeFunctionSpec(ex.var(1) ** 2, 1, "hermitian_PD")
    point, v = concavity_to_hypograph_witness(sq, [[[1.0]]], [[[3.0]]], 0.5)
    assert not v.holds and v.margin == pytest.approx(-1)
    conc = certify_concave(sq, trials=200, seed=2)
    w = conc.witness
    A = np.array([np.array([complex(*e) for e in m["data"]]).reshape(m["rows"], m["cols"]) for m in w["A"]])
    B = np.array([np.array([complex(*e) for e in m["data"]]).reshape(m["rows"], m["cols"]) for m in w["B"]])
    _, v = concavity_to_hypograph_witness(sq, A, B, w["lambda"])
    assert not v.holds


def test_contraction_gate():
    assert contraction_applicable(zoo.spec("affine-pos"))
    assert not contraction_applicable(zoo.spec("identity"))
    assert not contraction_applicable(zoo.affine(-1, [1.0]))


def test_dimension_cap():
    with pytest.raises(DimensionError):
        check_matrix_convexity(zoo.spec("identity"), n_list=(MAX_DIM,), trials=1)


def test_direct_sum_subtest_tight():
    rep = check_matrix_convexity(zoo.spec("sqrt-re"), trials=100, seed=3)
    assert not rep.violated


@pytest.mark.parametrize("name", [n for n, e in zoo.ZOO.items() if e.into_p_re])
def test_agrees_with_concavity_and_monotonicity(name):
    from realmono.certifiers import certify_monotone
    F = zoo.spec(name)
    h = check_matrix_convexity(F, trials=150, seed=4)
    m = certify_monotone(F, trials=150, seed=4, minimize=False)
    assert h.violated == m.violated
