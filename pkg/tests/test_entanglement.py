import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from omsim.entanglement import (MonogamyWarning, analyze, cavity_lognegs, logneg_bipartition,
                                logneg_two_mode, partial_transpose, reduce_covariance,
                                residual_contangle_min, steady_state)
from omsim.solver import NoSteadyStateError, symplectic_eigenvalues

from conftest import fig2_params, fig4_params, random_physical_cov, rotation, tmsv


class TestReduce:
    def test_keep_all(self, rng):
        V = random_physical_cov(3, rng)
        np.testing.assert_array_equal(reduce_covariance(V, [0, 1, 2]), V)

    def test_diag(self):
        V = np.diag(np.arange(1.0, 7.0))
        np.testing.assert_array_equal(reduce_covariance(V, [0, 2]), np.diag([1.0, 2, 5, 6]))

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            reduce_covariance(np.eye(6), [0, 3])

    def test_fig2_pair(self, dmb):
        V = steady_state(dmb)
        assert logneg_two_mode(reduce_covariance(V, [0, 2])) == pytest.approx(0.14, abs=0.015)


class TestPartialTranspose:
    def test_empty_party(self, rng):
        V = random_physical_cov(3, rng)
        np.testing.assert_array_equal(partial_transpose(V, []), V)

    def test_diagonal_unchanged(self):
        V = np.diag(np.arange(1.0, 7.0))
        np.testing.assert_array_equal(partial_transpose(V, [1]), V)

    @given(st.integers(0, 2 ** 32 - 1), st.sets(st.integers(0, 2)))
    @settings(max_examples=40, deadline=None)
    def test_involution(self, seed, party):
        V = random_physical_cov(3, np.random.default_rng(seed))
        W = partial_transpose(V, party)
        np.testing.assert_array_equal(partial_transpose(W, party), V)
        np.testing.assert_array_equal(W, W.T)

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_tmsv(self, r):
        W = partial_transpose(tmsv(r), [1])
        assert W[1, 3] == pytest.approx(+0.5 * math.sinh(2 * r))  # Y-Y cross block flipped
        assert symplectic_eigenvalues(W)[0] == pytest.approx(math.exp(-2 * r) / 2, rel=1e-12)


class TestLogneg:
    def test_vacuum(self):
        assert logneg_two_mode(np.eye(4) / 2) == 0.0

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0])
    def test_tmsv(self, r):
        assert logneg_two_mode(tmsv(r)) == pytest.approx(2 * r, abs=1e-9)
        assert logneg_bipartition(tmsv(r), {0}) == pytest.approx(2 * r, abs=1e-9)

    def test_fig2_values(self, dmb):
        E = cavity_lognegs(steady_state(dmb))
        assert E[0] == pytest.approx(0.14, abs=0.015)
        assert E[1] == pytest.approx(0.12, abs=0.015)

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            logneg_two_mode(np.eye(6) / 2)

    def test_product_state_bipartition(self):
        assert logneg_bipartition(np.eye(6) / 2, {2}) == 0.0

    def test_bipartition_party_checked(self):
        with pytest.raises(ValueError):
            logneg_bipartition(np.eye(6) / 2, {0, 1, 2})
        with pytest.raises(ValueError):
            logneg_bipartition(np.eye(6) / 2, set())

    def test_closed_form_matches_spectrum(self, rng):
        for _ in range(100):
            V = random_physical_cov(3, rng)
            for j in (0, 1):
                Vp = reduce_covariance(V, [j, 2])
                assert logneg_two_mode(Vp) == pytest.approx(logneg_bipartition(Vp, {0}), abs=1e-9)

    def test_separable_clamped_exactly(self):
        V = np.diag([1.0, 1.0, 0.7, 0.7])
        assert logneg_two_mode(V) == 0.0
        assert logneg_bipartition(V, {1}) == 0.0

    @given(st.integers(0, 2 ** 32 - 1), st.floats(0, 2 * math.pi), st.integers(0, 2))
    @settings(max_examples=40, deadline=None)
    def test_local_rotation_invariance(self, seed, phi, mode):
        V = random_physical_cov(3, np.random.default_rng(seed))
        R = rotation(3, mode, phi)
        W = R @ V @ R.T
        for party in ({0}, {1}, {2}):
            assert logneg_bipartition(W, party) == pytest.approx(logneg_bipartition(V, party), abs=1e-9)
        np.testing.assert_allclose(cavity_lognegs(W), cavity_lognegs(V), atol=1e-9)


class TestContangle:
    def test_product_state(self):
        e_tau, res = residual_contangle_min(np.diag([0.5, 0.5, 3.0, 3.0, 0.5, 0.5]))
        assert e_tau == 0.0 and res == (0.0, 0.0, 0.0)

    def test_fig2b(self):
        e_tau, res = residual_contangle_min(steady_state(fig2_params(Delta=0.6)))
        assert e_tau == pytest.approx(0.013, abs=0.003)
        assert min(res) == e_tau and all(r >= -1e-9 for r in res)

    @pytest.mark.parametrize("delta", np.linspace(0.4, 1.6, 13))
    def test_dmu_zero(self, delta):
        e_tau, res = residual_contangle_min(steady_state(fig2_params(chi=0.0, Delta=delta)))
        assert abs(e_tau) < 1e-9
        assert all(r >= -1e-9 for r in res)

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            residual_contangle_min(np.eye(8) / 2)

    def test_no_warning_on_physical_state(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", MonogamyWarning)
            residual_contangle_min(steady_state(fig2_params()))

    def test_violation_warns(self, monkeypatch):
        import omsim.entanglement as ent
        # fake a one-vs-two negativity of zero while the pairs stay entangled
        monkeypatch.setattr(ent, "logneg_bipartition", lambda V, party: 0.0)
        with pytest.warns(MonogamyWarning):
            e_tau, _ = ent.residual_contangle_min(steady_state(fig2_params()))
        assert e_tau < 0


class TestAnalyze:
    def test_two_mode_report(self, dmb):
        rep = analyze(dmb)
        assert rep.stable and rep.E_tau is not None and len(rep.residuals) == 3
        assert rep.to_dict()["E_N"] == rep.E_N

    def test_network_report(self):
        rep = analyze(fig4_params(4))
        assert len(rep.E_N) == 4 and rep.E_tau is None
        assert all(e > 0 for e in rep.E_N)

    def test_unstable(self):
        with pytest.raises(NoSteadyStateError):
            analyze(fig2_params(Delta=-1.0, G1=0.5, G2=0.5))
