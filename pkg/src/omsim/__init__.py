"""Steady-state entanglement of a cavity mode and N vibrational modes coupled
in a loop with phase-dependent phonon hopping."""

__version__ = "0.1.0"

from .kernels import BACKEND
from .model import (DriveParams, NetworkParams, ParameterError, TwoModeParams, build_diffusion,
                    build_drift, build_drift_network, build_drift_two_mode,
                    cavity_steady_amplitude, drive_amplitude)
from .solver import (NoSteadyStateError, StabilityReport, assess_stability, integrate_lyapunov,
                     solve_lyapunov, symplectic_eigenvalues)
from .entanglement import (EntanglementReport, analyze, logneg_bipartition, logneg_two_mode,
                           partial_transpose, reduce_covariance, residual_contangle_min)
from .modes import (ModeDecomposition, bright_dark_two_mode, dark_mode_present,
                    network_hybrid_modes, tilde_modes)
from .sweep import Axis, SweepSpec, find_threshold, run_sweep
