"""Pure numpy implementation of the per-point kernels.

Mirrors ``_kernels.pyx`` function for function; selected by ``omsim.kernels``
when the compiled module is unavailable.
"""

from __future__ import annotations

import math

import numpy as np

# relative slack on the closed-form discriminant before declaring a state unphysical
DISCRIMINANT_TOL = 1e-12


def lyapunov_kron(A, Q):
    """Solve A V + V A^T = -Q through the vectorized (I x A + A x I) system."""
    A = np.ascontiguousarray(A, dtype=float)
    Q = np.ascontiguousarray(Q, dtype=float)
    n = A.shape[0]
    eye = np.eye(n)
    M = np.kron(eye, A) + np.kron(A, eye)
    v = np.linalg.solve(M, -Q.reshape(-1, order="F"))
    V = v.reshape((n, n), order="F")
    return 0.5 * (V + V.T)


def _det2(a, b, c, d):
    return a * d - b * c


def logneg_pair(Vp):
    """Logarithmic negativity of a two-mode covariance from its 2x2 blocks."""
    Vp = np.asarray(Vp, dtype=float)
    det_a = _det2(Vp[0, 0], Vp[0, 1], Vp[1, 0], Vp[1, 1])
    det_b = _det2(Vp[2, 2], Vp[2, 3], Vp[3, 2], Vp[3, 3])
    det_c = _det2(Vp[0, 2], Vp[0, 3], Vp[1, 2], Vp[1, 3])
    det_v = float(np.linalg.det(Vp))
    sigma = det_a + det_b - 2.0 * det_c
    disc = sigma * sigma - 4.0 * det_v
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL * sigma * sigma:
            raise ValueError(f"unphysical covariance: negative discriminant {disc:.3e}")
        disc = 0.0
    denom = sigma + math.sqrt(disc)
    # zeta^2 = (sigma - sqrt(disc))/2 rewritten to avoid cancellation
    positive = det_a > 0.0 and det_b > 0.0 and Vp[0, 0] > 0.0 and Vp[2, 2] > 0.0
    if denom <= 0.0 or det_v <= 0.0 or not positive:
        raise ValueError("unphysical covariance: non-positive partial-transpose spectrum")
    zeta = math.sqrt(2.0 * det_v / denom)
    return max(0.0, -math.log(2.0 * zeta))


def cavity_lognegs(V):
    """Log-negativity between each vibration and the cavity (last mode)."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2 - 1
    out = np.empty(n)
    for j in range(n):
        idx = [2 * j, 2 * j + 1, 2 * n, 2 * n + 1]
        out[j] = logneg_pair(V[np.ix_(idx, idx)])
    return out
