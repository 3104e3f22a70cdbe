"""
Hybrid mechanical modes and their effective coupling to the cavity.

A hybrid mode is written as a row ``u`` of a unitary matrix, D = sum_j u_j d_j.
Its coupling to the cavity in the beam-splitter part of the linearized
Hamiltonian, sum_l (Gt_l D_l c^+ + h.c.), is Gt_l = sum_j G_j conj(u_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .model import NetworkParams, SystemParams, TwoModeParams, as_network

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class ModeDecomposition:
    coefficients: NDArray[np.complex128]
    effective_couplings: NDArray[np.complex128]
    frequencies: NDArray[np.float64] | None = None
    labels: tuple[str, ...] = ()
    fallback: bool = False

    @property
    def coupling_magnitudes(self) -> NDArray[np.float64]:
        return np.abs(self.effective_couplings)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        U = self.coefficients
        return bool(np.allclose(U @ U.conj().T, np.eye(U.shape[0]), rtol=0.0, atol=tol))

    def to_dict(self) -> dict:
        out = {
            "labels": list(self.labels),
            "coupling_magnitudes": self.coupling_magnitudes.tolist(),
            "effective_couplings": [[z.real, z.imag] for z in self.effective_couplings],
            "coefficients": [[[z.real, z.imag] for z in row] for row in self.coefficients],
            "fallback": self.fallback,
        }
        out["frequencies"] = None if self.frequencies is None else self.frequencies.tolist()
        return out


def _couplings(U, G) -> NDArray[np.complex128]:
    return np.conj(U) @ np.asarray(G, dtype=complex)


def bright_dark_two_mode(G1: float, G2: float) -> ModeDecomposition:
    """Bright and dark combinations of two degenerate vibrations without hopping."""
    norm = math.hypot(G1, G2)
    if norm == 0.0:
        raise ValueError("bright/dark modes undefined when both couplings vanish")
    U = np.array([[G1, G2], [G2, -G1]], dtype=complex) / norm
    return ModeDecomposition(coefficients=U, effective_couplings=np.array([norm, 0.0], dtype=complex),
                             labels=("bright", "dark"))


def tilde_modes(p: TwoModeParams) -> ModeDecomposition:
    """Eigenmodes of the two-vibration block with hopping chi e^{i Theta}.

    Rows are (D+, D-) with frequencies (w+, w-), w+ >= w-. At ``chi == 0``
    the closed form is singular and the bare (or, when degenerate,
    bright/dark) modes are returned with ``fallback=True``.
    """
    w1, w2, chi, th = p.omega1, p.omega2, p.chi, p.Theta
    if chi == 0.0:
        if w1 == w2:
            bd = bright_dark_two_mode(p.G1, p.G2)
            return ModeDecomposition(coefficients=bd.coefficients,
                                     effective_couplings=bd.effective_couplings,
                                     frequencies=np.array([w1, w2]), labels=bd.labels,
                                     fallback=True)
        U = np.eye(2, dtype=complex) if w1 > w2 else np.eye(2, dtype=complex)[::-1]
        freqs = np.array([max(w1, w2), min(w1, w2)])
        return ModeDecomposition(coefficients=U, effective_couplings=_couplings(U, [p.G1, p.G2]),
                                 frequencies=freqs, labels=("+", "-"), fallback=True)

    root = math.sqrt((w1 - w2) ** 2 + 4.0 * chi * chi)
    w_plus = 0.5 * (w1 + w2 + root)
    w_minus = 0.5 * (w1 + w2 - root)
    dw = w_minus - w1
    F = abs(dw) / math.sqrt(dw * dw + chi * chi)
    K = chi * F / dw
    ph = complex(math.cos(th), math.sin(th))
    U = np.array([[F, -ph * K], [K / ph, F]], dtype=complex)
    g_plus = F * p.G1 - K * p.G2 / ph
    g_minus = F * p.G2 + ph * K * p.G1
    return ModeDecomposition(coefficients=U, effective_couplings=np.array([g_plus, g_minus]),
                             frequencies=np.array([w_plus, w_minus]), labels=("+", "-"))


def network_hybrid_modes(N: int, G: float = 1.0, omega: float | None = None) -> ModeDecomposition:
    """Bright mode and N-1 Fourier dark modes of N identical, uncoupled vibrations."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    j = np.arange(1, N + 1)
    l = np.arange(N)
    U = np.exp(2j * np.pi * np.outer(l, j - 0.5 * (N + 1)) / N) / math.sqrt(N)
    U[0] = 1.0 / math.sqrt(N)
    freqs = None if omega is None else np.full(N, float(omega))
    labels = ("bright",) + tuple(f"dark{k}" for k in range(1, N))
    return ModeDecomposition(coefficients=U, effective_couplings=_couplings(U, np.full(N, G)),
                             frequencies=freqs, labels=labels)


def mechanical_hamiltonian(p: SystemParams) -> NDArray[np.complex128]:
    """Single-excitation matrix h of sum_jk h_jk d_j^+ d_k for the vibrations."""
    p = as_network(p)
    h = np.diag(np.asarray(p.omega, dtype=complex))
    for j, (chi, th) in enumerate(zip(p.chi, p.Theta)):
        h[j, j + 1] = chi * np.exp(1j * th)
        h[j + 1, j] = np.conj(h[j, j + 1])
    return h


def gauge_transformed(p: SystemParams) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Move the hopping phases of the open chain into the cavity couplings.

    Returns the real hopping matrix and couplings G_j exp(i sum_{v<j} Theta_v).
    Only the cumulative phases reach the cavity, which is why a single
    nonzero Theta_1 can break every dark mode.
    """
    p = as_network(p)
    h = np.diag(np.asarray(p.omega, dtype=float))
    for j, chi in enumerate(p.chi):
        h[j, j + 1] = h[j + 1, j] = chi
    phases = np.concatenate([[0.0], np.cumsum(p.Theta)])
    return h, np.asarray(p.G) * np.exp(1j * phases)


def diagonalize_mechanics(p: SystemParams) -> ModeDecomposition:
    """Numerical eigenmodes of the vibration block, ascending frequency."""
    w, v = np.linalg.eigh(mechanical_hamiltonian(p))
    U = v.conj().T
    return ModeDecomposition(coefficients=U, effective_couplings=_couplings(U, as_network(p).G),
                             frequencies=w, labels=tuple(str(k + 1) for k in range(len(w))))


def dark_mode_count(p: SystemParams, tol: float | None = None) -> int:
    """Number of hybrid vibration modes that do not couple to the cavity.

    Degenerate eigenspaces are handled as a whole: the cavity couples to at
    most one direction inside each, so the rest of the eigenspace is dark.
    """
    h, g = gauge_transformed(p)
    if tol is None:
        tol = 1e-6 * float(np.max(np.abs(g)))
    w, v = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(w))))
    count = 0
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > DEGENERACY_TOL * scale:
            overlap = np.linalg.norm(v[:, start:k].T @ g)
            bright = overlap > 0.0 if tol == 0.0 else overlap >= tol
            count += (k - start) - int(bright)
            start = k
    return count


def dark_mode_present(p: SystemParams, tol: float | None = None) -> bool:
    """True iff some hybrid vibration has cavity coupling below ``tol`` (default 1e-6 max G)."""
    return dark_mode_count(p, tol) > 0
