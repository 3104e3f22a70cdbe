"""
Bipartite logarithmic negativity and the minimum residual contangle of
Gaussian states given by their covariance matrix (vacuum variance 1/2).

Mode indices are 0-based positions in the quadrature ordering, so for a
two-vibration system 0 -> d1, 1 -> d2, 2 -> cavity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .model import SystemParams, as_network, build_diffusion, build_drift
from .solver import NoSteadyStateError, assess_stability, solve_lyapunov, symplectic_eigenvalues

MONOGAMY_TOL = 1e-9


class MonogamyWarning(UserWarning):
    """A residual contangle came out below -1e-9."""


def _quadrature_index(modes: Iterable[int], n_modes: int) -> list[int]:
    idx = []
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexError(f"mode index {m} out of range for {n_modes} modes")
        idx += [2 * m, 2 * m + 1]
    return idx


def reduce_covariance(V, modes: Sequence[int]) -> NDArray[np.float64]:
    """Keep the rows and columns of ``modes``; their relative order follows ``V``."""
    V = np.asarray(V, dtype=float)
    modes = sorted(set(modes))
    idx = _quadrature_index(modes, V.shape[0] // 2)
    return V[np.ix_(idx, idx)]


def partial_transpose(V, party: Iterable[int]) -> NDArray[np.float64]:
    """Momentum reversal on the modes in ``party``."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    sign = np.ones(2 * n)
    for m in set(party):
        if not 0 <= m < n:
            raise IndexError(f"mode index {m} out of range for {n} modes")
        sign[2 * m + 1] = -1.0
    return sign[:, None] * V * sign[None, :]


def logneg_two_mode(Vp) -> float:
    """E_N = max[0, -ln(2 zeta)] for a 4x4 covariance, closed form.

    ``zeta`` is the smallest symplectic eigenvalue of the partial transpose,
    obtained from det A + det B - 2 det C and det V'.
    """
    Vp = np.asarray(Vp, dtype=float)
    if Vp.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance, got {Vp.shape}")
    return float(kernels.logneg_pair(Vp))


def logneg_bipartition(V, party: Iterable[int]) -> float:
    """E_N across ``party`` vs the rest, from the smallest symplectic eigenvalue of the partial transpose."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    party = set(party)
    if not party or len(party) >= n:
        raise ValueError("party must be a nonempty proper subset of the modes")
    nu = symplectic_eigenvalues(partial_transpose(V, party))[0]
    return max(0.0, -float(np.log(2.0 * nu)))


def residual_contangle_min(V) -> tuple[float, tuple[float, float, float]]:
    """Minimum over pivots r of E_tau^{r|(st)} - E_tau^{r|s} - E_tau^{r|t}.

    Contangles are squared logarithmic negativities. Returns the minimum and
    the three residuals with pivots in mode order (d1, d2, c).
    """
    V = np.asarray(V, dtype=float)
    if V.shape != (6, 6):
        raise ValueError(f"residual contangle needs a 3-mode (6x6) covariance, got {V.shape}")
    residuals = []
    for r in range(3):
        s, t = (m for m in range(3) if m != r)
        one_vs_two = logneg_bipartition(V, {r}) ** 2
        pair_s = logneg_two_mode(reduce_covariance(V, (r, s))) ** 2
        pair_t = logneg_two_mode(reduce_covariance(V, (r, t))) ** 2
        residuals.append(one_vs_two - pair_s - pair_t)
    if min(residuals) < -MONOGAMY_TOL:
        warnings.warn(f"monogamy violated: residual contangles {residuals}", MonogamyWarning,
                      stacklevel=2)
    return min(residuals), tuple(residuals)


def cavity_lognegs(V) -> NDArray[np.float64]:
    """E_N between each vibration and the cavity, which is the last mode of ``V``."""
    return kernels.cavity_lognegs(np.asarray(V, dtype=float))


@dataclass
class EntanglementReport:
    E_N: list[float]
    stability_margin: float
    stable: bool
    E_tau: float | None = None
    residuals: list[float] | None = field(default=None)

    def to_dict(self) -> dict:
        out = {"stable": self.stable, "stability_margin": self.stability_margin,
               "E_N": list(self.E_N)}
        if self.E_tau is not None:
            out["E_tau"] = self.E_tau
            out["residuals"] = list(self.residuals)
        return out


def steady_state(p: SystemParams) -> NDArray[np.float64]:
    """Steady-state covariance of the full system."""
    return solve_lyapunov(build_drift(p), build_diffusion(p))


def analyze(p: SystemParams, *, with_contangle: bool | None = None) -> EntanglementReport:
    """Stability, cavity-vibration E_N and (for two vibrations) the residual contangle.

    Raises ``NoSteadyStateError`` for unstable parameters.
    """
    A = build_drift(p)
    rep = assess_stability(A)
    if not rep.stable:
        raise NoSteadyStateError(f"no steady state: max Re(eig A) = {rep.margin:.6g}")
    V = solve_lyapunov(A, build_diffusion(p), check_stability=False)
    report = EntanglementReport(E_N=[float(x) for x in cavity_lognegs(V)],
                                stability_margin=rep.margin, stable=rep.stable)
    if with_contangle is None:
        with_contangle = as_network(p).N == 2
    if with_contangle:
        e_tau, res = residual_contangle_min(V)
        report.E_tau = e_tau
        report.residuals = list(res)
    return report
