import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from omsim.model import (DriveParams, NetworkParams, ParameterError, TwoModeParams,
                         build_diffusion, build_drift_network, build_drift_two_mode,
                         cavity_steady_amplitude, drive_amplitude, linearize_drive,
                         real_amplitude_drive_phase, reduce_phase)

from conftest import fig2_params, fig4_params

HBAR = 1.054571817e-34


def drive(P=1e-3):
    return DriveParams(P_L=P, omega_L=2 * math.pi * 200e12, omega_c=2 * math.pi * 200e12,
                       g=(1.0, 2.0), kappa=2 * math.pi * 1e6)


class TestDrive:
    def test_zero_power(self):
        assert drive_amplitude(drive(0.0)) == 0.0

    def test_square_root_law(self):
        assert drive_amplitude(drive(2e-3)) == pytest.approx(math.sqrt(2) * drive_amplitude(drive(1e-3)),
                                                             rel=1e-14)

    def test_one_milliwatt(self):
        # 2 * 2pi*1e6 * 1e-3 / (hbar * 2pi*200e12) = 1e-11 / hbar
        expected = math.sqrt(1e-11 / HBAR)
        assert drive_amplitude(drive()) == pytest.approx(expected, rel=1e-9)
        assert drive_amplitude(drive()) == pytest.approx(3.0793e11, rel=1e-4)

    def test_validation(self):
        with pytest.raises(ParameterError):
            DriveParams(P_L=-1, omega_L=1, omega_c=1, g=(1,), kappa=1)

    def test_cavity_amplitude_examples(self):
        assert cavity_steady_amplitude(0, 1.0, 0.3) == 0
        # -i conj(Omega) / kappa is +1 for Omega = -i kappa
        assert cavity_steady_amplitude(-1j * 0.7, 0.7, 0.0) == pytest.approx(1.0)
        assert cavity_steady_amplitude(1j * 0.7, 0.7, 0.0) == pytest.approx(-1.0)

    def test_cavity_amplitude_modulus(self, rng):
        for _ in range(50):
            om = complex(*rng.normal(size=2))
            k, D = rng.uniform(0.01, 2), rng.normal()
            c = cavity_steady_amplitude(om, k, D)
            assert abs(c) == pytest.approx(abs(om) / math.hypot(k, D), rel=1e-13)

    def test_real_amplitude_phase(self, rng):
        for _ in range(20):
            k, D = rng.uniform(0.01, 2), rng.normal()
            phi = real_amplitude_drive_phase(k, D)
            c = cavity_steady_amplitude(2.5 * np.exp(1j * phi), k, D)
            assert abs(c.imag) < 1e-12 and c.real > 0

    def test_linearize(self):
        D, G = linearize_drive(drive(), omega_m=2 * math.pi * 10e6)
        assert D == 0.0
        c_ss = drive_amplitude(drive()) / (2 * math.pi * 1e6)
        assert G == pytest.approx((c_ss / (2 * math.pi * 10e6), 2 * c_ss / (2 * math.pi * 10e6)))


class TestParams:
    def test_theta_reduced(self):
        assert fig2_params(Theta=2 * math.pi + 0.5).Theta == pytest.approx(0.5)
        assert fig2_params(Theta=-math.pi / 2).Theta == pytest.approx(1.5 * math.pi)
        assert 0 <= fig2_params(Theta=-1e-300).Theta < 2 * math.pi

    @pytest.mark.parametrize("field,value", [("kappa", 0.0), ("gamma1", -1e-5), ("nbar2", -1.0),
                                             ("chi", -0.1), ("Delta", float("nan"))])
    def test_invalid(self, field, value):
        with pytest.raises(ParameterError) as exc:
            fig2_params(**{field: value})
        assert exc.value.field == field

    def test_network_lengths(self):
        with pytest.raises(ParameterError, match="chi"):
            NetworkParams(omega=(1, 1, 1), G=(1, 1, 1), gamma=(1, 1, 1), nbar=(0, 0, 0),
                          chi=(0.1,), Theta=(0, 0), Delta=1, kappa=1)
        with pytest.raises(ParameterError, match="at least 2"):
            NetworkParams(omega=(1,), G=(1,), gamma=(1,), nbar=(0,), chi=(), Theta=(),
                          Delta=1, kappa=1)

    def test_round_trip(self):
        p = fig2_params(omega2=1.1, nbar1=3.0)
        assert p.to_network().to_two_mode() == p

    def test_reduce_phase_range(self):
        for t in [0.0, 2 * math.pi, -2 * math.pi, 7.0, -7.0, 4 * math.pi - 1e-17]:
            assert 0.0 <= reduce_phase(t) < 2 * math.pi


def eq4_template(w1, w2, G1, G2, chi, Th, D, k, g1, g2):
    """Coefficient matrix as printed, entered as a sparse dict of 1-based positions."""
    cp, cm = chi * math.sin(Th), chi * math.cos(Th)
    entries = {
        (1, 1): -g1, (1, 2): w1, (1, 3): cp, (1, 4): cm,
        (2, 1): -w1, (2, 2): -g1, (2, 3): -cm, (2, 4): cp, (2, 5): -2 * G1,
        (3, 1): -cp, (3, 2): cm, (3, 3): -g2, (3, 4): w2,
        (4, 1): -cm, (4, 2): -cp, (4, 3): -w2, (4, 4): -g2, (4, 5): -2 * G2,
        (5, 5): -k, (5, 6): D,
        (6, 1): -2 * G1, (6, 3): -2 * G2, (6, 5): -D, (6, 6): -k,
    }
    A = np.zeros((6, 6))
    for (i, j), v in entries.items():
        A[i - 1, j - 1] = v
    return A


class TestDrift:
    def test_decoupled_blocks(self):
        p = fig2_params(G1=0, G2=0, chi=0, omega2=1.3, gamma2=2e-5, Delta=0.7)
        A = build_drift_two_mode(p)
        expected = np.zeros((6, 6))
        expected[0:2, 0:2] = [[-1e-5, 1], [-1, -1e-5]]
        expected[2:4, 2:4] = [[-2e-5, 1.3], [-1.3, -2e-5]]
        expected[4:6, 4:6] = [[-0.2, 0.7], [-0.7, -0.2]]
        np.testing.assert_array_equal(A, expected)

    def test_chi_plus_minus(self):
        A = build_drift_two_mode(fig2_params())
        assert A[0, 2] == pytest.approx(0.1)  # chi_+
        assert A[0, 3] == pytest.approx(0.0, abs=1e-16)  # chi_-

    def test_fig2_coupling_entries(self):
        A = build_drift_two_mode(fig2_params())
        for i, j in [(2, 5), (4, 5), (6, 1), (6, 3)]:
            assert A[i - 1, j - 1] == pytest.approx(-0.4)

    def test_matches_printed_template(self, rng):
        for _ in range(100):
            vals = dict(omega1=rng.uniform(0.5, 1.5), omega2=rng.uniform(0.5, 1.5),
                        G1=rng.uniform(0, 0.5), G2=rng.uniform(0, 0.5), chi=rng.uniform(0, 0.3),
                        Theta=rng.uniform(0, 2 * math.pi), Delta=rng.normal(),
                        kappa=rng.uniform(0.01, 1), gamma1=rng.uniform(1e-6, 0.1),
                        gamma2=rng.uniform(1e-6, 0.1), nbar1=1.0, nbar2=1.0)
            p = TwoModeParams(**vals)
            expected = eq4_template(p.omega1, p.omega2, p.G1, p.G2, p.chi, p.Theta, p.Delta,
                                    p.kappa, p.gamma1, p.gamma2)
            np.testing.assert_array_equal(build_drift_two_mode(p), expected)

    @given(st.floats(-20, 20), st.floats(0, 1))
    @settings(max_examples=60, deadline=None)
    def test_phase_periodicity(self, theta, chi):
        a = build_drift_two_mode(fig2_params(Theta=theta, chi=chi))
        b = build_drift_two_mode(fig2_params(Theta=theta + 2 * math.pi, chi=chi))
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)

    @given(st.floats(0, 2 * math.pi))
    @settings(max_examples=30, deadline=None)
    def test_no_theta_dependence_without_hopping(self, theta):
        a = build_drift_two_mode(fig2_params(chi=0.0))
        np.testing.assert_array_equal(a, build_drift_two_mode(fig2_params(chi=0.0, Theta=theta)))

    def test_network_n2_matches_two_mode(self, rng):
        for _ in range(20):
            p = fig2_params(omega2=rng.uniform(0.5, 1.5), G1=rng.uniform(0, .3), chi=rng.uniform(0, .3),
                            Theta=rng.uniform(0, 7), Delta=rng.normal(), gamma2=rng.uniform(1e-5, .1))
            np.testing.assert_array_equal(build_drift_network(p.to_network()), build_drift_two_mode(p))

    def test_network_n3_decoupled(self):
        p = fig4_params(3, chi=0.0)
        A = build_drift_network(p)
        assert A.shape == (8, 8)
        for j in range(3):
            for k in range(3):
                if j != k:
                    assert not A[2 * j:2 * j + 2, 2 * k:2 * k + 2].any()
            assert A[2 * j + 1, 6] == -0.4 and A[7, 2 * j] == -0.4

    @pytest.mark.parametrize("N", [3, 4])
    def test_network_matches_symbolic_heisenberg(self, N):
        """Linearized equations of motion derived from the Hamiltonian with sympy."""
        p = fig4_params(N).replace(omega=tuple(1 + 0.05 * j for j in range(N)),
                                   Theta=tuple(0.3 + 1.1 * j for j in range(N - 1)))
        X = sp.symbols(f"x1:{N + 1}", real=True)
        Y = sp.symbols(f"y1:{N + 1}", real=True)
        Xc, Yc = sp.symbols("xc yc", real=True)
        d = [(X[j] + sp.I * Y[j]) / sp.sqrt(2) for j in range(N)]
        c = (Xc + sp.I * Yc) / sp.sqrt(2)
        H = p.Delta * sp.conjugate(c) * c
        for j in range(N):
            H += p.omega[j] * sp.conjugate(d[j]) * d[j]
            H += p.G[j] * (c + sp.conjugate(c)) * (d[j] + sp.conjugate(d[j]))
        for j in range(N - 1):
            hop = p.chi[j] * sp.exp(sp.I * p.Theta[j]) * sp.conjugate(d[j]) * d[j + 1]
            H += hop + sp.conjugate(hop)
        H = sp.expand(H)
        u = [v for j in range(N) for v in (X[j], Y[j])] + [Xc, Yc]
        # [X, Y] = i:  dX/dt = dH/dY,  dY/dt = -dH/dX
        rhs = []
        for j in range(N + 1):
            x, y = u[2 * j], u[2 * j + 1]
            rhs += [sp.diff(H, y), -sp.diff(H, x)]
        J = np.array(sp.Matrix(rhs).jacobian(u).evalf(), dtype=complex)
        assert np.abs(J.imag).max() < 1e-12
        damping = np.diag(np.repeat(list(p.gamma) + [p.kappa], 2))
        np.testing.assert_allclose(build_drift_network(p), J.real - damping, atol=1e-12)


class TestDiffusion:
    def test_vacuum_bath(self):
        Q = build_diffusion(fig2_params(nbar1=0, nbar2=0, gamma2=3e-5))
        np.testing.assert_array_equal(np.diag(Q), [1e-5, 1e-5, 3e-5, 3e-5, 0.2, 0.2])

    def test_thermal_entry(self):
        assert np.diag(build_diffusion(fig2_params()))[0] == pytest.approx(2.01e-3, rel=1e-12)

    def test_shape_n4(self):
        Q = build_diffusion(fig4_params(4))
        assert Q.shape == (10, 10)
        assert np.count_nonzero(Q - np.diag(np.diag(Q))) == 0
        np.testing.assert_allclose(np.diag(Q)[8:], [0.2, 0.2])
        np.testing.assert_allclose(np.diag(Q)[:8], 1e-5 * 21)

    def test_independent_of_coherent_parameters(self):
        a = build_diffusion(fig2_params())
        b = build_diffusion(fig2_params(Delta=0.3, G1=0.05, chi=0.0, Theta=1.0))
        np.testing.assert_array_equal(a, b)
        assert (np.diag(a) >= 0).all()
