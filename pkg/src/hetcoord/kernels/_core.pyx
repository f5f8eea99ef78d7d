# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: small regularized Hermitian solves and pair gains.

Semantics match hetcoord.kernels.pure exactly (up to floating-point rounding);
see that module for the contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

ctypedef double complex dc

DEF MAX_Z = 8


def slnr_beamformers(dc[:, ::1] design, cnp.uint8_t[:, ::1] mask,
                     double[::1] noise_var, cnp.int64_t[::1] served):
    cdef Py_ssize_t U = design.shape[0]
    cdef Py_ssize_t Z = design.shape[1]
    cdef Py_ssize_t K = served.shape[0]
    if Z > MAX_Z:
        raise ValueError(f"compiled kernel supports up to {MAX_Z} antennas, got {Z}")
    out_arr = np.empty((K, Z), dtype=np.complex128)
    cdef dc[:, ::1] out = out_arr
    cdef dc A[MAX_Z][MAX_Z]
    cdef dc L[MAX_Z][MAX_Z]
    cdef dc y[MAX_Z]
    cdef dc x[MAX_Z]
    cdef dc s, du_i
    cdef double diag, nrm
    cdef Py_ssize_t a, u, i, j, p, k

    for a in range(K):
        k = served[a]
        for i in range(Z):
            for j in range(Z):
                A[i][j] = 0
        for u in range(U):
            if mask[a, u]:
                for i in range(Z):
                    du_i = design[u, i].conjugate()
                    for j in range(Z):
                        A[i][j] = A[i][j] + du_i * design[u, j]
        for i in range(Z):
            A[i][i] = A[i][i] + noise_var[a]

        # Cholesky A = L L^H (A is Hermitian positive definite for sigma^2 > 0)
        for i in range(Z):
            s = A[i][i]
            for p in range(i):
                s = s - L[i][p] * L[i][p].conjugate()
            diag = sqrt(s.real)
            L[i][i] = diag
            for j in range(i + 1, Z):
                s = A[j][i]
                for p in range(i):
                    s = s - L[j][p] * L[i][p].conjugate()
                L[j][i] = s / diag

        # Solve L y = conj(h_k), then L^H x = y
        for i in range(Z):
            s = design[k, i].conjugate()
            for p in range(i):
                s = s - L[i][p] * y[p]
            y[i] = s / L[i][i].real
        for i in range(Z - 1, -1, -1):
            s = y[i]
            for p in range(i + 1, Z):
                s = s - L[p][i].conjugate() * x[p]
            x[i] = s / L[i][i].real

        nrm = 0.0
        for i in range(Z):
            nrm += x[i].real * x[i].real + x[i].imag * x[i].imag
        nrm = sqrt(nrm)
        for i in range(Z):
            out[a, i] = x[i] / nrm
    return out_arr


def pair_gains(dc[:, ::1] channels, dc[:, ::1] vectors):
    cdef Py_ssize_t U = channels.shape[0]
    cdef Py_ssize_t Z = channels.shape[1]
    cdef Py_ssize_t K = vectors.shape[0]
    out_arr = np.empty((U, K), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t u, q, i
    cdef dc s
    for u in range(U):
        for q in range(K):
            s = 0
            for i in range(Z):
                s = s + channels[u, i] * vectors[q, i]
            out[u, q] = s.real * s.real + s.imag * s.imag
    return out_arr
