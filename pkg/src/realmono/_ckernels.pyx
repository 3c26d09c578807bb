# cython: language_level=3
"""Compiled kernels. Semantics mirror ``_pykernels`` exactly."""

import numpy as np


def sqrtm_triu(double complex[:, ::1] T):
    """Principal square root of an upper-triangular complex matrix.

    Diagonal roots are principal; off-diagonal entries follow the
    column-by-column recurrence. Raises ZeroDivisionError when two
    diagonal roots cancel (singular, non-diagonalisable case).
    """
    cdef Py_ssize_t n = T.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double complex s, denom
    out = np.zeros((n, n), dtype=np.complex128)
    out[np.diag_indices(n)] = np.sqrt(np.diagonal(np.asarray(T)))
    cdef double complex[:, ::1] R = out
    for j in range(n):
        for i in range(j - 1, -1, -1):
            s = 0
            for k in range(i + 1, j):
                s = s + R[i, k] * R[k, j]
            denom = R[i, i] + R[j, j]
            if denom == 0:
                if T[i, j] - s == 0:
                    R[i, j] = 0
                    continue
                raise ZeroDivisionError("square root does not exist for this triangular factor")
            R[i, j] = (T[i, j] - s) / denom
    return out


def hermitian_defect(double complex[:, ::1] X):
    """max |X[i, j] - conj(X[j, i])| over all entries."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i, j
    cdef double worst = 0.0, d, re, im
    for i in range(n):
        for j in range(i, n):
            re = X[i, j].real - X[j, i].real
            im = X[i, j].imag + X[j, i].imag
            d = re * re + im * im
            if d > worst:
                worst = d
    return worst ** 0.5
