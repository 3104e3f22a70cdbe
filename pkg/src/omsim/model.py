"""
System parameters and the linear quadrature dynamics of a cavity mode
coupled to N vibrational modes with phase-dependent phonon hopping.

Frequencies and rates are dimensionless, in units of a reference mechanical
frequency omega_m. Quadratures are ordered

    [X_d1, Y_d1, X_d2, Y_d2, ..., X_dN, Y_dN, X_c, Y_c]

with X = (a^+ + a)/sqrt(2), Y = i(a^+ - a)/sqrt(2), so the vacuum variance is 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.constants import hbar

TWO_PI = 2.0 * math.pi


class ParameterError(ValueError):
    """Invalid physical parameter; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def reduce_phase(theta: float) -> float:
    """Map a phase onto [0, 2pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of values just below a multiple of 2pi can round up to 2pi
    return 0.0 if t >= TWO_PI else t


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(name, f"must be finite, got {value!r}")
    return value


def _check_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ParameterError(name, f"must be > 0, got {value!r}")


def _check_nonneg(name: str, value: float) -> None:
    if not value >= 0.0:
        raise ParameterError(name, f"must be >= 0, got {value!r}")


@dataclass(frozen=True)
class NetworkParams:
    """Open chain of N >= 2 vibrations, each coupled to one cavity mode.

    Hopping link ``j`` connects vibrations ``j`` and ``j+1`` with strength
    ``chi[j]`` and phase ``Theta[j]``. There is no link closing the chain.
    """

    omega: tuple[float, ...]
    G: tuple[float, ...]
    gamma: tuple[float, ...]
    nbar: tuple[float, ...]
    chi: tuple[float, ...]
    Theta: tuple[float, ...]
    Delta: float
    kappa: float
    omega_m_hz: float | None = field(default=None, compare=False)

    def __post_init__(self):
        per_mode = ("omega", "G", "gamma", "nbar")
        for name in per_mode + ("chi", "Theta"):
            values = getattr(self, name)
            if np.ndim(values) != 1:
                raise ParameterError(name, "must be a sequence of numbers")
            checked = tuple(_check_finite(f"{name}[{k + 1}]", v) for k, v in enumerate(values))
            object.__setattr__(self, name, checked)
        n = len(self.omega)
        if n < 2:
            raise ParameterError("omega", f"need at least 2 vibrational modes, got {n}")
        for name in per_mode:
            if len(getattr(self, name)) != n:
                raise ParameterError(name, f"expected {n} entries, got {len(getattr(self, name))}")
        for name in ("chi", "Theta"):
            if len(getattr(self, name)) != n - 1:
                raise ParameterError(name, f"expected {n - 1} entries, got {len(getattr(self, name))}")
        for k in range(n):
            _check_positive(f"gamma[{k + 1}]", self.gamma[k])
            _check_nonneg(f"nbar[{k + 1}]", self.nbar[k])
        for k in range(n - 1):
            _check_nonneg(f"chi[{k + 1}]", self.chi[k])
        object.__setattr__(self, "Theta", tuple(reduce_phase(t) for t in self.Theta))
        object.__setattr__(self, "Delta", _check_finite("Delta", self.Delta))
        object.__setattr__(self, "kappa", _check_finite("kappa", self.kappa))
        _check_positive("kappa", self.kappa)
        if self.omega_m_hz is not None:
            object.__setattr__(self, "omega_m_hz", _check_finite("omega_m_hz", self.omega_m_hz))
            _check_positive("omega_m_hz", self.omega_m_hz)

    @property
    def N(self) -> int:
        return len(self.omega)

    def replace(self, **changes) -> "NetworkParams":
        return replace(self, **changes)

    def to_two_mode(self) -> "TwoModeParams":
        if self.N != 2:
            raise ValueError(f"network has {self.N} vibrational modes, not 2")
        return TwoModeParams(
            omega1=self.omega[0], omega2=self.omega[1],
            G1=self.G[0], G2=self.G[1],
            chi=self.chi[0], Theta=self.Theta[0],
            Delta=self.Delta, kappa=self.kappa,
            gamma1=self.gamma[0], gamma2=self.gamma[1],
            nbar1=self.nbar[0], nbar2=self.nbar[1],
        )

    @classmethod
    def uniform(cls, N: int, *, omega: float = 1.0, G: float, gamma: float, nbar: float,
                chi: float, Theta: Sequence[float] | float = 0.0, Delta: float,
                kappa: float) -> "NetworkParams":
        """Identical vibrations and identical hopping strengths."""
        if np.ndim(Theta) == 0:
            Theta = [Theta] * (N - 1)
        return cls(omega=(omega,) * N, G=(G,) * N, gamma=(gamma,) * N, nbar=(nbar,) * N,
                   chi=(chi,) * (N - 1), Theta=tuple(Theta), Delta=Delta, kappa=kappa)


@dataclass(frozen=True)
class TwoModeParams:
    """Two vibrations in a loop with the cavity (one hopping link)."""

    omega1: float
    omega2: float
    G1: float
    G2: float
    chi: float
    Theta: float
    Delta: float
    kappa: float
    gamma1: float
    gamma2: float
    nbar1: float
    nbar2: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "G1", "G2", "chi", "Theta", "Delta", "kappa",
                     "gamma1", "gamma2", "nbar1", "nbar2"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        _check_positive("kappa", self.kappa)
        _check_positive("gamma1", self.gamma1)
        _check_positive("gamma2", self.gamma2)
        _check_nonneg("nbar1", self.nbar1)
        _check_nonneg("nbar2", self.nbar2)
        _check_nonneg("chi", self.chi)
        object.__setattr__(self, "Theta", reduce_phase(self.Theta))

    N = 2

    def replace(self, **changes) -> "TwoModeParams":
        return replace(self, **changes)

    def to_network(self) -> NetworkParams:
        return NetworkParams(
            omega=(self.omega1, self.omega2), G=(self.G1, self.G2),
            gamma=(self.gamma1, self.gamma2), nbar=(self.nbar1, self.nbar2),
            chi=(self.chi,), Theta=(self.Theta,), Delta=self.Delta, kappa=self.kappa,
        )


SystemParams = Union[TwoModeParams, NetworkParams]


def as_network(p: SystemParams) -> NetworkParams:
    return p.to_network() if isinstance(p, TwoModeParams) else p


@dataclass(frozen=True)
class DriveParams:
    """Laboratory drive settings, all rates in rad/s and power in W."""

    P_L: float
    omega_L: float
    omega_c: float
    g: tuple[float, ...]
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(float(x) for x in self.g))
        _check_nonneg("P_L", self.P_L)
        _check_positive("omega_L", self.omega_L)
        _check_positive("kappa", self.kappa)


def drive_amplitude(d: DriveParams) -> float:
    """Drive amplitude |Omega| = sqrt(2 kappa P_L / (hbar omega_L)) in rad/s."""
    return math.sqrt(2.0 * d.kappa * d.P_L / (hbar * d.omega_L))


def cavity_steady_amplitude(Omega: complex, kappa: float, Delta: float) -> complex:
    """Mean intracavity amplitude <c>_ss = -i Omega^* / (kappa + i Delta)."""
    if not kappa > 0:
        raise ParameterError("kappa", f"must be > 0, got {kappa!r}")
    return -1j * np.conj(complex(Omega)) / (kappa + 1j * Delta)


def real_amplitude_drive_phase(kappa: float, Delta: float) -> float:
    """Phase of Omega for which <c>_ss is real and positive."""
    return reduce_phase(-0.5 * math.pi - math.atan2(Delta, kappa))


def linearize_drive(d: DriveParams, omega_m: float) -> tuple[float, tuple[float, ...]]:
    """Dimensionless (Delta, G_j) from drive settings.

    The detuning is taken as the bare cavity detuning omega_c - omega_L; the
    static mechanical shift is not included. ``omega_m`` is in rad/s.
    """
    _check_positive("omega_m", omega_m)
    delta_c = d.omega_c - d.omega_L
    c_ss = abs(drive_amplitude(d)) / math.hypot(d.kappa, delta_c)
    return delta_c / omega_m, tuple(gj * c_ss / omega_m for gj in d.g)


def build_drift_two_mode(p: TwoModeParams) -> NDArray[np.float64]:
    """The 6x6 drift matrix, written out entry by entry."""
    chi_p = p.chi * math.sin(p.Theta)
    chi_m = p.chi * math.cos(p.Theta)
    g1, g2, w1, w2 = p.gamma1, p.gamma2, p.omega1, p.omega2
    G1, G2, k, D = p.G1, p.G2, p.kappa, p.Delta
    return np.array([
        [-g1, w1, chi_p, chi_m, 0.0, 0.0],
        [-w1, -g1, -chi_m, chi_p, -2 * G1, 0.0],
        [-chi_p, chi_m, -g2, w2, 0.0, 0.0],
        [-chi_m, -chi_p, -w2, -g2, -2 * G2, 0.0],
        [0.0, 0.0, 0.0, 0.0, -k, D],
        [-2 * G1, 0.0, -2 * G2, 0.0, -D, -k],
    ])


def build_drift_network(p: NetworkParams) -> NDArray[np.float64]:
    """Drift matrix of dimension 2(N+1) for an open hopping chain."""
    n = p.N
    c = 2 * n
    A = np.zeros((c + 2, c + 2))
    for j in range(n):
        x, y = 2 * j, 2 * j + 1
        A[x, x] = A[y, y] = -p.gamma[j]
        A[x, y] = p.omega[j]
        A[y, x] = -p.omega[j]
        A[y, c] = -2.0 * p.G[j]
        A[c + 1, x] = -2.0 * p.G[j]
    for j in range(n - 1):
        chi_p = p.chi[j] * math.sin(p.Theta[j])
        chi_m = p.chi[j] * math.cos(p.Theta[j])
        a, b = 2 * j, 2 * j + 2
        A[a:a + 2, b:b + 2] = [[chi_p, chi_m], [-chi_m, chi_p]]
        A[b:b + 2, a:a + 2] = [[-chi_p, chi_m], [-chi_m, -chi_p]]
    A[c, c] = A[c + 1, c + 1] = -p.kappa
    A[c, c + 1] = p.Delta
    A[c + 1, c] = -p.Delta
    return A


def build_drift(p: SystemParams) -> NDArray[np.float64]:
    if isinstance(p, TwoModeParams):
        return build_drift_two_mode(p)
    return build_drift_network(p)


def build_diffusion(p: SystemParams) -> NDArray[np.float64]:
    """Diagonal noise matrix: gamma_j(2 nbar_j + 1) per vibration quadrature, kappa for the cavity."""
    p = as_network(p)
    entries = []
    for gamma, nbar in zip(p.gamma, p.nbar):
        entries += [gamma * (2.0 * nbar + 1.0)] * 2
    entries += [p.kappa, p.kappa]
    return np.diag(entries)
