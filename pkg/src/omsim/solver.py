"""
Stability of the drift matrix, steady-state covariance from the Lyapunov
equation A V + V A^T = -Q, and symplectic spectra of covariance matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from . import kernels

# |margin| below this is reported as numerically marginal
MARGINAL_MARGIN = 1e-10
PAIRING_TOL = 1e-9


class NoSteadyStateError(RuntimeError):
    """The drift matrix has an eigenvalue with non-negative real part."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    margin: float
    spectrum: tuple[complex, ...]

    @property
    def marginal(self) -> bool:
        return abs(self.margin) < MARGINAL_MARGIN

    def to_dict(self) -> dict:
        return {
            "stable": self.stable,
            "margin": self.margin,
            "marginal": self.marginal,
            "spectrum": [[z.real, z.imag] for z in self.spectrum],
        }


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal [[0, 1], [-1, 0]] for ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def assess_stability(A) -> StabilityReport:
    """Hurwitz test: stable iff every eigenvalue of A has negative real part."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"drift matrix must be square, got shape {A.shape}")
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigenvalue solver failed on drift matrix: {exc}") from exc
    if not np.all(np.isfinite(eig)):
        raise np.linalg.LinAlgError("eigenvalue solver returned non-finite values")
    order = np.lexsort((eig.imag, eig.real))
    eig = eig[order]
    margin = float(np.max(eig.real))
    return StabilityReport(stable=margin < 0.0, margin=margin,
                           spectrum=tuple(complex(z) for z in eig))


def lyapunov_residual(A, V, Q) -> float:
    """||A V + V A^T + Q|| / ||Q|| (Frobenius), or the absolute norm when Q = 0."""
    R = A @ V + V @ A.T + Q
    qn = np.linalg.norm(Q)
    rn = float(np.linalg.norm(R))
    return rn / qn if qn > 0 else rn


def solve_lyapunov(A, Q, *, check_stability: bool = True) -> NDArray[np.float64]:
    """Steady-state covariance V with A V + V A^T = -Q.

    Raises
    ------
    NoSteadyStateError
        If A is not Hurwitz.
    numpy.linalg.LinAlgError
        If the vectorized linear system is singular.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if A.shape != Q.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"incompatible shapes A{A.shape}, Q{Q.shape}")
    if check_stability:
        rep = assess_stability(A)
        if not rep.stable:
            raise NoSteadyStateError(f"no steady state: max Re(eig A) = {rep.margin:.6g}")
    try:
        return kernels.lyapunov_kron(A, Q)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular Lyapunov system: {exc}") from exc


def _step_propagator(A, Q, h):
    """exp(A h) and the covariance accumulated from zero over time h (Van Loan block exponential)."""
    n = A.shape[0]
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = -A
    M[:n, n:] = Q
    M[n:, n:] = A.T
    E = expm(M * h)
    phi_T = E[n:, n:]
    W = phi_T.T @ E[:n, n:]
    return phi_T.T, 0.5 * (W + W.T)


def integrate_lyapunov(A, Q, t_final: float = 1e12, tol: float = 1e-11,
                       t_step: float | None = None) -> NDArray[np.float64]:
    """Evolve dV/dt = A V + V A^T + Q from V(0) = 0 until it stops changing.

    The flow is propagated exactly over a short step and then by repeated
    time doubling, V(2t) = e^{At} V(t) e^{A^T t} + V(t). Stops once
    ||dV/dt|| / ||Q|| < ``tol``.

    Raises
    ------
    ConvergenceError
        If ``t_final`` is reached first; ``residual`` holds the last value.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if not assess_stability(A).stable:
        raise NoSteadyStateError("no steady state: drift matrix is not Hurwitz")
    if not np.any(Q):
        return np.zeros_like(Q)
    if t_step is None:
        t_step = 0.1 / max(1.0, float(np.max(np.abs(A))))
    phi, V = _step_propagator(A, Q, t_step)
    t = t_step
    residual = lyapunov_residual(A, V, Q)
    while residual >= tol:
        if t >= t_final:
            raise ConvergenceError(
                f"no convergence by t={t:.3g}: ||dV/dt||/||Q|| = {residual:.3e}", residual)
        V = phi @ V @ phi.T + V
        V = 0.5 * (V + V.T)
        phi = phi @ phi
        t *= 2.0
        residual = lyapunov_residual(A, V, Q)
    return V


def symplectic_eigenvalues(V) -> NDArray[np.float64]:
    """Symplectic spectrum of a 2n x 2n covariance matrix, ascending, n values."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError(f"covariance must be square with even dimension, got {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if not np.allclose(V, V.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("covariance matrix is not symmetric")
    n = V.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ V)))
    lo, hi = ev[0::2], ev[1::2]
    if np.any(np.abs(hi - lo) > PAIRING_TOL * scale):
        raise ValueError("symplectic eigenvalues do not pair up; is V a valid covariance?")
    return 0.5 * (lo + hi)
