import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.linalg

from realmono import BACKEND, _pykernels
from realmono.hermitian import sample, sqrtm_principal

try:
    from realmono import _ckernels
except ImportError:  # pragma: no cover - fallback-only install
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _upper(seed, n):
    T, _ = scipy.linalg.schur(sample("real_positive", n, 1, seed)[0], output="complex")
    return np.ascontiguousarray(T)


@needs_ext
@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_kernels_agree(n):
    T = _upper(n, n)
    a = np.asarray(_ckernels.sqrtm_triu(T))
    b = np.asarray(_pykernels.sqrtm_triu(T))
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1, np.max(np.abs(b)))
    G = T + T.conj().T * 0.5
    assert _ckernels.hermitian_defect(G) == pytest.approx(_pykernels.hermitian_defect(G), rel=1e-12)


def test_python_kernel_squares_back():
    T = _upper(3, 6)
    R = _pykernels.sqrtm_triu(T)
    assert np.max(np.abs(R @ R - T)) <= 1e-10 * np.max(np.abs(T))


def test_backend_selected():
    assert BACKEND in ("cython", "python")
    forced = os.environ.get("REALMONO_PURE") == "1"
    assert BACKEND == ("cython" if _ckernels is not None and not forced else "python")


def test_pure_python_fallback():
    env = dict(os.environ, REALMONO_PURE="1")
    code = ("import realmono, numpy as np; from realmono.hermitian import sqrtm_principal as s; "
            "print(realmono.BACKEND); print(np.allclose(s(np.diag([4.0, 9.0])), np.diag([2.0, 3.0])))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]


def test_principal_sqrt_against_scipy():
    X = sample("real_positive", 6, 1, 9)[0]
    assert np.allclose(sqrtm_principal(X), scipy.linalg.sqrtm(X), atol=1e-10)
