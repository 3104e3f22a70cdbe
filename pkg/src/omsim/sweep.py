"""
Parameter sweeps over one or two axes and a bisection-based threshold finder.

Parameter names follow the JSON config: ``Delta``, ``kappa`` and the per-mode
arrays ``omega``, ``G``, ``gamma``, ``nbar``, ``chi``, ``theta``. A bare array
name sets every entry (so ``nbar`` heats all vibrations alike); ``omega[2]``
or ``omega2`` sets a single 1-based entry.
"""

from __future__ import annotations

import csv
import io
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .entanglement import cavity_lognegs, residual_contangle_min
from .model import NetworkParams, SystemParams, as_network, build_diffusion, build_drift_network
from .modes import tilde_modes
from .solver import assess_stability, solve_lyapunov

DEFAULT_POINTS_1D = 201
DEFAULT_POINTS_2D = 101
PRESCAN_POINTS = 17

_ARRAY_FIELDS = {"omega": "omega", "G": "G", "gamma": "gamma", "nbar": "nbar",
                 "chi": "chi", "theta": "Theta", "Theta": "Theta"}
_NAME_RE = re.compile(r"^(omega|G|gamma|nbar|chi|theta|Theta)(?:\[(\d+)\]|(\d+))?$")
_EN_RE = re.compile(r"^E_N_(\d+)$")


class SweepError(ValueError):
    pass


class ThresholdError(RuntimeError):
    pass


def set_parameter(p: SystemParams, name: str, value: float) -> NetworkParams:
    """Copy of ``p`` with one named parameter changed."""
    p = as_network(p)
    if name in ("Delta", "kappa"):
        return p.replace(**{name: float(value)})
    m = _NAME_RE.match(name)
    if not m:
        raise SweepError(f"unknown parameter {name!r}")
    attr = _ARRAY_FIELDS[m.group(1)]
    values = list(getattr(p, attr))
    index = m.group(2) or m.group(3)
    if index is None:
        values = [float(value)] * len(values)
    else:
        k = int(index)
        if not 1 <= k <= len(values):
            raise SweepError(f"{name}: index out of range 1..{len(values)}")
        values[k - 1] = float(value)
    return p.replace(**{attr: tuple(values)})


def check_outputs(outputs: Sequence[str], n_vib: int) -> None:
    for name in outputs:
        m = _EN_RE.match(name)
        if m:
            if not 1 <= int(m.group(1)) <= n_vib:
                raise SweepError(f"output {name}: system has {n_vib} vibrations")
        elif name in ("E_tau", "Gt_plus", "Gt_minus"):
            if n_vib != 2:
                raise SweepError(f"output {name} is only defined for two vibrations")
        elif name != "stability_margin":
            raise SweepError(f"unknown output {name!r}")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int = DEFAULT_POINTS_1D
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise SweepError(f"axis {self.name}: count must be >= 2")
        if not self.start < self.stop:
            raise SweepError(f"axis {self.name}: start must be < stop")
        if self.scale not in ("linear", "log"):
            raise SweepError(f"axis {self.name}: scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise SweepError(f"axis {self.name}: log scale needs start > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    base: NetworkParams
    axes: tuple[Axis, ...]
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", as_network(self.base))
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise SweepError("a sweep needs one or two axes")
        if not self.outputs:
            object.__setattr__(self, "outputs",
                               tuple(f"E_N_{j}" for j in range(1, self.base.N + 1)))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        check_outputs(self.outputs, self.base.N)
        for ax in self.axes:
            set_parameter(self.base, ax.name, ax.start)

    def grid(self) -> list[tuple[float, ...]]:
        """Grid coordinates in row-major order (last axis fastest)."""
        if len(self.axes) == 1:
            return [(float(x),) for x in self.axes[0].values()]
        return [(float(x), float(y)) for x in self.axes[0].values() for y in self.axes[1].values()]


def evaluate_point(p: SystemParams, outputs: Sequence[str]) -> dict:
    """All requested outputs at one parameter point.

    Returns a dict with ``stable``, ``error`` (None or message) and one entry
    per output; entanglement entries are None when there is no steady state.
    """
    p = as_network(p)
    row: dict = {name: None for name in outputs}
    row["stable"] = False
    row["error"] = None
    try:
        if "Gt_plus" in outputs or "Gt_minus" in outputs:
            mags = tilde_modes(p.to_two_mode()).coupling_magnitudes
            if "Gt_plus" in outputs:
                row["Gt_plus"] = float(mags[0])
            if "Gt_minus" in outputs:
                row["Gt_minus"] = float(mags[1])
        A = build_drift_network(p)
        rep = assess_stability(A)
        row["stable"] = rep.stable
        if "stability_margin" in outputs:
            row["stability_margin"] = rep.margin
        wants_en = [n for n in outputs if _EN_RE.match(n)]
        if not rep.stable or not (wants_en or "E_tau" in outputs):
            return row
        V = solve_lyapunov(A, build_diffusion(p), check_stability=False)
        if wants_en:
            en = cavity_lognegs(V)
            for name in wants_en:
                row[name] = float(en[int(_EN_RE.match(name).group(1)) - 1])
        if "E_tau" in outputs:
            row["E_tau"] = float(residual_contangle_min(V)[0])
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def resolve_threads(threads: int | None) -> int:
    """0 or None means auto; falls back to OMSIM_THREADS."""
    if threads is None:
        env = os.environ.get("OMSIM_THREADS", "").strip()
        threads = int(env) if env else 1
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


@dataclass
class SweepResult:
    axis_names: tuple[str, ...]
    outputs: tuple[str, ...]
    coords: list[tuple[float, ...]]
    rows: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        """Values of an axis or output; NaN where empty."""
        if name in self.axis_names:
            k = self.axis_names.index(name)
            return np.array([c[k] for c in self.coords])
        if name == "stable":
            return np.array([r["stable"] for r in self.rows])
        return np.array([np.nan if r[name] is None else r[name] for r in self.rows], dtype=float)

    @property
    def has_errors(self) -> bool:
        return any(r["error"] for r in self.rows)

    def header(self) -> list[str]:
        cols = list(self.axis_names) + list(self.outputs) + ["stable"]
        return cols + ["error"] if self.has_errors else cols

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.header())
        for coord, row in zip(self.coords, self.rows):
            line = [format_number(x) for x in coord]
            line += ["" if row[name] is None else format_number(row[name]) for name in self.outputs]
            line.append("1" if row["stable"] else "0")
            if self.has_errors:
                line.append(row["error"] or "")
            writer.writerow(line)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def format_number(x: float) -> str:
    return f"{x:.12g}"


def run_sweep(spec: SweepSpec, threads: int | None = 1) -> SweepResult:
    """Evaluate every grid point; failures are recorded per row, never raised."""
    coords = spec.grid()
    names = tuple(ax.name for ax in spec.axes)

    def task(coord):
        p = spec.base
        for name, value in zip(names, coord):
            p = set_parameter(p, name, value)
        return evaluate_point(p, spec.outputs)

    n_threads = resolve_threads(threads)
    if n_threads == 1:
        rows = [task(c) for c in coords]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(task, coords))
    return SweepResult(axis_names=names, outputs=spec.outputs, coords=coords, rows=rows)


def bisect_boundary(predicate: Callable[[float], bool], a: float, b: float, *,
                    rtol: float = 1e-3, geometric: bool = False, max_iter: int = 200) -> float:
    """Locate where ``predicate`` flips between ``a`` and ``b``.

    ``predicate(a)`` and ``predicate(b)`` must differ. Iterates until the
    bracket is narrower than ``rtol`` relative to its larger end and
    returns its midpoint.
    """
    pa = predicate(a)
    if pa == predicate(b):
        raise ThresholdError(f"no change of sign between {a} and {b}")
    for _ in range(max_iter):
        if abs(b - a) <= rtol * max(abs(a), abs(b)):
            break
        mid = math.sqrt(a * b) if geometric else 0.5 * (a + b)
        if predicate(mid) == pa:
            a = mid
        else:
            b = mid
    return math.sqrt(a * b) if geometric else 0.5 * (a + b)


def find_threshold(base: SystemParams, param: str, bracket: tuple[float, float],
                   target_output: str = "E_N_1", *, rtol: float = 1e-3,
                   scale: str | None = None) -> float:
    """Parameter value where ``target_output`` reaches zero.

    A 17-point pre-scan over the bracket must be monotone and must contain
    both positive and zero values; the crossing is then refined by bisection.
    Brackets spanning more than a decade with a positive lower end are
    scanned and bisected on a log scale unless ``scale`` says otherwise.
    """
    base = as_network(base)
    check_outputs([target_output], base.N)
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ThresholdError("bracket must satisfy lo < hi")
    if scale is None:
        scale = "log" if lo > 0 and hi / lo >= 10 else "linear"
    geometric = scale == "log"

    def value(x: float) -> float:
        row = evaluate_point(set_parameter(base, param, x), [target_output])
        if row["error"]:
            raise ThresholdError(f"{param}={x:.6g}: {row['error']}")
        if not row["stable"]:
            raise ThresholdError(f"{param}={x:.6g}: no steady state")
        return row[target_output]

    xs = Axis(param, lo, hi, PRESCAN_POINTS, "log" if geometric else "linear").values()
    ys = [value(x) for x in xs]
    diffs = np.diff(ys)
    monotone = np.all(diffs <= 1e-12) or np.all(diffs >= -1e-12)
    if not monotone:
        listing = ", ".join(f"{x:.4g}:{y:.4g}" for x, y in zip(xs, ys))
        raise ThresholdError(f"{target_output} is not monotone in {param}: {listing}")
    positive = [y > 0.0 for y in ys]
    if all(positive) or not any(positive):
        raise ThresholdError(f"{target_output} does not reach zero inside [{lo}, {hi}]")
    k = next(i for i in range(1, len(xs)) if positive[i] != positive[i - 1])
    return bisect_boundary(lambda x: value(x) > 0.0, float(xs[k - 1]), float(xs[k]),
                           rtol=rtol, geometric=geometric)
