import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from realmono import expr as ex
from realmono import zoo
from realmono.errors import ArityError, ContractError, DomainError, SpecError
from realmono.free import (
    FreeFunctionSpec,
    check_free_axioms,
    check_similarity_invariance,
    evaluate,
    make_corollary_form,
)
from realmono.hermitian import direct_sum, im_part, re_part, sample

from .conftest import seeds

X1, X2 = ex.var(1), ex.var(2)


def test_evaluate_examples():
    X = sample("real_positive", 3, 1, 0)
    assert np.array_equal(evaluate(FreeFunctionSpec(X1, 1), X), X[0])
    F = FreeFunctionSpec(1 + 2 * X1 + 3 * X2, 2, "all")
    assert np.allclose(evaluate(F, np.stack([np.eye(2)] * 2)), 6 * np.eye(2))
    assert np.allclose(zoo.spec("neg-re-inverse")([[[2 + 5j]]]), [[-0.5]])


def test_evaluate_errors():
    with pytest.raises(DomainError):
        zoo.spec("neg-inverse")([[[-1.0]]])
    with pytest.raises(DomainError):
        evaluate(FreeFunctionSpec(ex.inv(X1), 1, "all"), [[[0.0]]])
    with pytest.raises(ArityError):
        zoo.spec("affine-pos")([[[1.0]]])


def test_spec_validation():
    with pytest.raises(SpecError):
        ex.const(np.eye(2))
    with pytest.raises(SpecError):
        FreeFunctionSpec.from_json({"arity": 1, "expr": {"op": "const", "value": {"rows": 2}}})
    with pytest.raises(SpecError):
        FreeFunctionSpec(X2, 1)
    with pytest.raises(SpecError):
        FreeFunctionSpec(X1, 1, "upper_half_plane")
    with pytest.raises(SpecError):
        FreeFunctionSpec.from_json({"expr": {"op": "var", "index": 1}})


@pytest.mark.parametrize("name", list(zoo.ZOO))
def test_json_round_trip(name, tmp_path):
    F = zoo.spec(name)
    path = tmp_path / "f.json"
    path.write_text(json.dumps(F.to_json()))
    G = FreeFunctionSpec.load(path)
    assert G == F
    X = sample("real_positive", 2, F.arity, 3)
    if F.domain == "hermitian_PD":
        X = re_part(X[0])[None].repeat(F.arity, 0)
    assert np.array_equal(evaluate(F, X), evaluate(G, X))


@pytest.mark.parametrize("name", list(zoo.ZOO))
def test_zoo_passes_free_axioms(name):
    F = zoo.spec(name)
    for n in (1, 2, 3, 4):
        ds, un = check_free_axioms(F, n, trials=15, seed=n)
        assert ds.passed and un.passed, (ds.max_residual, un.max_residual)


def test_affine_axioms_tight():
    ds, un = check_free_axioms(zoo.affine(1, [2, 3]), 3, trials=100, seed=0)
    assert ds.max_residual <= 1e-12 and un.max_residual <= 1e-12


@given(seeds)
def test_direct_sum_spectrum_union(seed):
    F = zoo.spec("cube")
    A = sample("real_positive", 2, 1, seed)
    B = sample("real_positive", 3, 1, seed + 1)
    w = np.sort_complex(np.linalg.eigvals(evaluate(F, direct_sum(A, B))))
    u = np.sort_complex(np.concatenate([np.linalg.eigvals(evaluate(F, A)), np.linalg.eigvals(evaluate(F, B))]))
    assert np.max(np.abs(w - u)) <= 1e-9 * max(1, np.max(np.abs(u)))


def test_similarity_examples():
    assert check_similarity_invariance(zoo.spec("cube"), 2, 50, 0).max_residual <= 1e-8
    assert check_similarity_invariance(zoo.affine(1 - 1j, [2, 0.5j]), 3, 50, 0).max_residual <= 1e-10
    r = check_similarity_invariance(zoo.spec("neg-re-inverse"), 2, 50, 0)
    assert r.max_residual > 0.01 and r.witness is not None


def test_corollary_form_examples():
    R, W = ex.var(1), ex.var(2)
    X = sample("real_positive", 3, 1, 7)
    zero = FreeFunctionSpec(ex.const(0), 2, "all", "0")
    ident = FreeFunctionSpec(R, 1, "hermitian_PD", "id")
    F = make_corollary_form(ident, zero)
    assert np.allclose(evaluate(F, X), re_part(X[0]))
    F = make_corollary_form(FreeFunctionSpec(-ex.inv(R), 1, "hermitian_PD"), zero)
    assert np.allclose(evaluate(F, X), -np.linalg.inv(re_part(X[0])))
    F = make_corollary_form(ident, FreeFunctionSpec(W, 2, "all"))
    assert np.allclose(evaluate(F, X), X[0])
    assert np.allclose(im_part(evaluate(F, X)), im_part(X[0]))


def test_corollary_form_rejects_non_hermitian_g():
    with pytest.raises(ContractError):
        make_corollary_form(FreeFunctionSpec(1j * ex.var(1), 1, "all"), FreeFunctionSpec(ex.const(0), 2, "all"))


@given(st.integers(1, 4), seeds)
def test_geomean_node_axioms(n, seed):
    ds, un = check_free_axioms(zoo.spec("geomean-hpd"), n, trials=3, seed=seed)
    assert ds.max_residual <= 1e-9 and un.max_residual <= 1e-9
