# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-point kernels; see ``_kernels_py`` for the reference version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, log

cnp.import_array()

DISCRIMINANT_TOL = 1e-12
cdef double _DISC_TOL = 1e-12
cdef double _EPS = 2.220446049250313e-16


cdef int _lu_solve(double[:, ::1] M, double[::1] b) noexcept nogil:
    """Gaussian elimination with partial pivoting, in place. Returns 1 if singular."""
    cdef Py_ssize_t m = M.shape[0]
    cdef Py_ssize_t i, j, k, piv
    cdef double amax = 0.0, v, f, tmp
    for i in range(m):
        for j in range(m):
            v = fabs(M[i, j])
            if v > amax:
                amax = v
    if amax == 0.0:
        return 1
    for k in range(m):
        piv = k
        v = fabs(M[k, k])
        for i in range(k + 1, m):
            if fabs(M[i, k]) > v:
                v = fabs(M[i, k])
                piv = i
        if v <= _EPS * amax * m:
            return 1
        if piv != k:
            for j in range(k, m):
                tmp = M[k, j]
                M[k, j] = M[piv, j]
                M[piv, j] = tmp
            tmp = b[k]
            b[k] = b[piv]
            b[piv] = tmp
        for i in range(k + 1, m):
            f = M[i, k] / M[k, k]
            if f != 0.0:
                for j in range(k + 1, m):
                    M[i, j] -= f * M[k, j]
                b[i] -= f * b[k]
    for i in range(m - 1, -1, -1):
        v = b[i]
        for j in range(i + 1, m):
            v -= M[i, j] * b[j]
        b[i] = v / M[i, i]
    return 0


def lyapunov_kron(A, Q):
    """Solve A V + V A^T = -Q through the vectorized (I x A + A x I) system."""
    cdef double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = n * n
    cdef Py_ssize_t i, j, k, row
    cdef int singular
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] V = out
    M_arr = np.zeros((m, m), dtype=np.float64)
    b_arr = np.empty(m, dtype=np.float64)
    cdef double[:, ::1] M = M_arr
    cdef double[::1] b = b_arr
    with nogil:
        # column-major vec: index of V[i, j] is j*n + i
        for j in range(n):
            for i in range(n):
                row = j * n + i
                b[row] = -q[i, j]
                for k in range(n):
                    M[row, j * n + k] += a[i, k]
                    M[row, k * n + i] += a[j, k]
        singular = _lu_solve(M, b)
        if not singular:
            for i in range(n):
                for j in range(i, n):
                    V[i, j] = 0.5 * (b[j * n + i] + b[i * n + j])
                    V[j, i] = V[i, j]
    if singular:
        raise np.linalg.LinAlgError("singular Lyapunov system")
    return out


cdef inline double _det4(double[:, ::1] v) noexcept nogil:
    cdef double s0 = v[0, 0] * v[1, 1] - v[1, 0] * v[0, 1]
    cdef double s1 = v[0, 0] * v[1, 2] - v[1, 0] * v[0, 2]
    cdef double s2 = v[0, 0] * v[1, 3] - v[1, 0] * v[0, 3]
    cdef double s3 = v[0, 1] * v[1, 2] - v[1, 1] * v[0, 2]
    cdef double s4 = v[0, 1] * v[1, 3] - v[1, 1] * v[0, 3]
    cdef double s5 = v[0, 2] * v[1, 3] - v[1, 2] * v[0, 3]
    cdef double c5 = v[2, 2] * v[3, 3] - v[3, 2] * v[2, 3]
    cdef double c4 = v[2, 1] * v[3, 3] - v[3, 1] * v[2, 3]
    cdef double c3 = v[2, 1] * v[3, 2] - v[3, 1] * v[2, 2]
    cdef double c2 = v[2, 0] * v[3, 3] - v[3, 0] * v[2, 3]
    cdef double c1 = v[2, 0] * v[3, 2] - v[3, 0] * v[2, 2]
    cdef double c0 = v[2, 0] * v[3, 1] - v[3, 0] * v[2, 1]
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0


cdef int _logneg(double[:, ::1] v, double* out) noexcept nogil:
    """0 on success, 1 negative discriminant, 2 non-positive spectrum."""
    cdef double det_a = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
    cdef double det_b = v[2, 2] * v[3, 3] - v[2, 3] * v[3, 2]
    cdef double det_c = v[0, 2] * v[1, 3] - v[0, 3] * v[1, 2]
    cdef double det_v = _det4(v)
    cdef double sigma = det_a + det_b - 2.0 * det_c
    cdef double disc = sigma * sigma - 4.0 * det_v
    cdef double denom, e
    if disc < 0.0:
        if disc < -_DISC_TOL * sigma * sigma:
            return 1
        disc = 0.0
    denom = sigma + sqrt(disc)
    if denom <= 0.0 or det_v <= 0.0 or det_a <= 0.0 or det_b <= 0.0 or v[0, 0] <= 0.0 or v[2, 2] <= 0.0:
        return 2
    e = -log(2.0 * sqrt(2.0 * det_v / denom))
    out[0] = e if e > 0.0 else 0.0
    return 0


def _raise(int code):
    if code == 1:
        raise ValueError("unphysical covariance: negative discriminant")
    raise ValueError("unphysical covariance: non-positive partial-transpose spectrum")


def logneg_pair(Vp):
    """Logarithmic negativity of a two-mode covariance from its 2x2 blocks."""
    cdef double[:, ::1] v = np.ascontiguousarray(Vp, dtype=np.float64)
    cdef double e = 0.0
    cdef int code
    with nogil:
        code = _logneg(v, &e)
    if code:
        _raise(code)
    return e


def cavity_lognegs(V):
    """Log-negativity between each vibration and the cavity (last mode)."""
    cdef double[:, ::1] full = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t n = full.shape[0] // 2 - 1
    cdef Py_ssize_t j, r, s
    cdef Py_ssize_t idx[4]
    cdef int code = 0
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef double[:, ::1] sub = np.empty((4, 4), dtype=np.float64)
    with nogil:
        for j in range(n):
            idx[0] = 2 * j
            idx[1] = 2 * j + 1
            idx[2] = 2 * n
            idx[3] = 2 * n + 1
            for r in range(4):
                for s in range(4):
                    sub[r, s] = full[idx[r], idx[s]]
            code = _logneg(sub, &res[j])
            if code:
                break
    if code:
        _raise(code)
    return out
