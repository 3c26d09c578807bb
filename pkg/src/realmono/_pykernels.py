"""Pure-Python fallback for the compiled kernels in ``_ckernels.pyx``."""

import numpy as np


def sqrtm_triu(T):
    T = np.ascontiguousarray(T, dtype=np.complex128)
    n = T.shape[0]
    R = np.zeros((n, n), dtype=np.complex128)
    R[np.diag_indices(n)] = np.sqrt(np.diagonal(T))
    for j in range(n):
        for i in range(j - 1, -1, -1):
            s = R[i, i + 1:j] @ R[i + 1:j, j]
            denom = R[i, i] + R[j, j]
            if denom == 0:
                if T[i, j] - s == 0:
                    continue
                raise ZeroDivisionError("square root does not exist for this triangular factor")
            R[i, j] = (T[i, j] - s) / denom
    return R


def hermitian_defect(X):
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    return float(np.max(np.abs(X - X.conj().T)))
