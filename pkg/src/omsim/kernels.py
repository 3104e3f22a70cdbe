"""Backend selection for the per-point numerical kernels.

The compiled module is used when importable, unless ``OMSIM_PURE_PYTHON`` is
set to a non-empty value other than ``0``.
"""

import os

_force_python = os.environ.get("OMSIM_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

lyapunov_kron = _impl.lyapunov_kron
logneg_pair = _impl.logneg_pair
cavity_lognegs = _impl.cavity_lognegs

__all__ = ["BACKEND", "lyapunov_kron", "logneg_pair", "cavity_lognegs"]
