# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Mirrors ``_kernels_py`` function for function; ``kernels`` picks one at
import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdint cimport uint64_t

cnp.import_array()

# 9**20 < 2**64: every partial sum of the seven-part expansion fits
MAX_SEVEN_K = 20


cdef uint64_t _binom[21][21]
cdef bint _binom_ready = False


cdef void _fill_binom():
    global _binom_ready
    cdef int n, r
    for n in range(21):
        for r in range(21):
            _binom[n][r] = 0
        _binom[n][0] = 1
        for r in range(1, n + 1):
            _binom[n][r] = _binom[n - 1][r - 1] + (_binom[n - 1][r] if r <= n - 1 else 0)
    _binom_ready = True


def seven_multinomial_sum(int p, int q, int k):
    """Sum of 3**k1 * multinomial(k; k1..k7) over admissible 7-compositions."""
    if k < 0 or k > MAX_SEVEN_K:
        raise ValueError(f"compiled seven-multinomial kernel supports 0 <= k <= {MAX_SEVEN_K}")
    if p <= 0:
        raise ValueError("p must be positive")
    if not _binom_ready:
        _fill_binom()
    cdef uint64_t pow3[21]
    cdef int i
    pow3[0] = 1
    for i in range(1, 21):
        pow3[i] = pow3[i - 1] * 3
    cdef uint64_t total = 0
    cdef uint64_t m1, m2, m3, m4, m5, m6
    cdef int k1, k2, k3, k4, k5, k6, k7
    cdef int r1, r2, r3, r4, r5, r6
    for k1 in range(k + 1):
        r1 = k - k1
        m1 = _binom[k][k1] * pow3[k1]
        for k2 in range(r1 + 1):
            r2 = r1 - k2
            m2 = m1 * _binom[r1][k2]
            for k3 in range(r2 + 1):
                r3 = r2 - k3
                m3 = m2 * _binom[r2][k3]
                for k4 in range(r3 + 1):
                    r4 = r3 - k4
                    m4 = m3 * _binom[r3][k4]
                    for k5 in range(r4 + 1):
                        r5 = r4 - k5
                        m5 = m4 * _binom[r4][k5]
                        for k6 in range(r5 + 1):
                            k7 = r5 - k6
                            if (-k2 - k4 + k5 + k7) % p != 0:
                                continue
                            if p * (-k2 + k3 + k5 - k6) != q * (k2 + k4 - k5 - k7):
                                continue
                            m6 = m5 * _binom[r5][k6]
                            total += m6
    return int(total)


def jacobi_eigen(cnp.ndarray a_in, double tol, int max_sweeps, bint want_vectors):
    """Cyclic Jacobi rotations on a private copy of a symmetric matrix.

    Returns ``(diagonal, vectors or None, sweeps, off_norm, frobenius_norm)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] varr = np.eye(n if want_vectors else 1, dtype=np.float64)
    cdef double[:, ::1] v = varr
    cdef Py_ssize_t i, j, p, q, kk
    cdef double fro = 0.0, off = 0.0
    cdef double apq, app, aqq, theta, t, c, s, x, y
    cdef int sweep = 0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    fro = sqrt(fro)
    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        off = sqrt(off)
        if off <= tol * fro or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for kk in range(n):
                    x = a[kk, p]
                    y = a[kk, q]
                    a[kk, p] = c * x - s * y
                    a[kk, q] = s * x + c * y
                for kk in range(n):
                    x = a[p, kk]
                    y = a[q, kk]
                    a[p, kk] = c * x - s * y
                    a[q, kk] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    for kk in range(n):
                        x = v[kk, p]
                        y = v[kk, q]
                        v[kk, p] = c * x - s * y
                        v[kk, q] = s * x + c * y
    diag = np.array([a[i, i] for i in range(n)], dtype=np.float64)
    return diag, (varr if want_vectors else None), sweep, off, fro
