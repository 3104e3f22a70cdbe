import math

import numpy as np
import pytest
from scipy.linalg import expm

from omsim.model import NetworkParams, TwoModeParams


def fig2_params(**changes) -> TwoModeParams:
    base = dict(omega1=1.0, omega2=1.0, G1=0.2, G2=0.2, chi=0.1, Theta=math.pi / 2,
                Delta=1.0, kappa=0.2, gamma1=1e-5, gamma2=1e-5, nbar1=100.0, nbar2=100.0)
    base.update(changes)
    return TwoModeParams(**base)


def fig4_params(N: int, chi: float = 0.1) -> NetworkParams:
    return NetworkParams.uniform(N, G=0.2, gamma=1e-5, nbar=10.0, chi=chi,
                                 Theta=[math.pi] + [0.0] * (N - 2), Delta=1.0, kappa=0.2)


def tmsv(r: float) -> np.ndarray:
    c, s = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def omega_form(n):
    return np.kron(np.eye(n), [[0.0, 1.0], [-1.0, 0.0]])


def random_symplectic(n, rng, scale=0.6):
    H = rng.normal(size=(2 * n, 2 * n)) * scale
    return expm(omega_form(n) @ (H + H.T) / 2)


def random_physical_cov(n, rng):
    """S diag(nu) S^T with symplectic S and nu >= 1/2."""
    nu = 0.5 + rng.exponential(1.0, size=n)
    S = random_symplectic(n, rng)
    V = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return 0.5 * (V + V.T)


def rotation(n, mode, phi):
    R = np.eye(2 * n)
    c, s = math.cos(phi), math.sin(phi)
    R[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = [[c, s], [-s, c]]
    return R


def random_stable_params(rng, n_vib=2):
    while True:
        p = NetworkParams(
            omega=tuple(rng.uniform(0.8, 1.2, n_vib)),
            G=tuple(rng.uniform(0.0, 0.25, n_vib)),
            gamma=tuple(10 ** rng.uniform(-5, -1, n_vib)),
            nbar=tuple(rng.uniform(0, 200, n_vib)),
            chi=tuple(rng.uniform(0, 0.2, n_vib - 1)),
            Theta=tuple(rng.uniform(0, 2 * math.pi, n_vib - 1)),
            Delta=rng.uniform(0.3, 1.5), kappa=rng.uniform(0.05, 1.0))
        from omsim.model import build_drift
        from omsim.solver import assess_stability
        if assess_stability(build_drift(p)).margin < -1e-7:
            return p


@pytest.fixture
def dmb():
    return fig2_params()


@pytest.fixture
def dmu():
    return fig2_params(chi=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20221015)
