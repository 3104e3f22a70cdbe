"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 2000] [--points 201]

Part one calls both kernel modules directly on the same inputs. Part two
runs a full sweep in a subprocess per backend, selected through
OMSIM_PURE_PYTHON, so the import-time switch is exercised as users see it.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from omsim import _kernels_py
from omsim.model import NetworkParams, build_diffusion, build_drift

try:
    from omsim import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

SWEEP_SNIPPET = """
import json, math, sys, time
from omsim import kernels
from omsim.model import NetworkParams
from omsim.sweep import Axis, SweepSpec, run_sweep
p = NetworkParams.uniform({n}, G=0.2, gamma=1e-5, nbar=100.0, chi=0.1,
                          Theta=[math.pi / 2] * {m}, Delta=1.0, kappa=0.2)
spec = SweepSpec(base=p, axes=[Axis("Delta", 0.5, 1.5, {points})])
t0 = time.perf_counter()
run_sweep(spec)
print(json.dumps({{"backend": kernels.BACKEND, "seconds": time.perf_counter() - t0}}))
"""


def kernel_timings(n_vib: int, repeat: int) -> dict:
    p = NetworkParams.uniform(n_vib, G=0.2, gamma=1e-5, nbar=100.0, chi=0.1,
                              Theta=[np.pi / 2] * (n_vib - 1), Delta=1.0, kappa=0.2)
    A, Q = build_drift(p), build_diffusion(p)
    V = _kernels_py.lyapunov_kron(A, Q)
    out = {}
    for label, mod in (("python", _kernels_py), ("compiled", _kernels_c)):
        if mod is None:
            continue
        t_lyap = timeit.timeit(lambda: mod.lyapunov_kron(A, Q), number=repeat) / repeat
        t_en = timeit.timeit(lambda: mod.cavity_lognegs(V), number=repeat) / repeat
        out[label] = (t_lyap, t_en)
    return out


def sweep_timing(pure: bool, n_vib: int, points: int) -> dict:
    env = dict(os.environ, OMSIM_PURE_PYTHON="1" if pure else "0")
    code = SWEEP_SNIPPET.format(n=n_vib, m=n_vib - 1, points=points)
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()

    if _kernels_c is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'N':>3} {'backend':>9} {'lyapunov us':>12} {'lognegs us':>11}")
    for n_vib in (2, 3, 4):
        rows = kernel_timings(n_vib, args.repeat)
        for label, (t_lyap, t_en) in rows.items():
            print(f"{n_vib:>3} {label:>9} {t_lyap * 1e6:>12.1f} {t_en * 1e6:>11.1f}")
        if len(rows) == 2:
            speed = [a / b for a, b in zip(rows["python"], rows["compiled"])]
            print(f"{'':>3} {'speedup':>9} {speed[0]:>11.1f}x {speed[1]:>10.1f}x")

    print(f"\nfull {args.points}-point sweep (fresh interpreter per backend)")
    for n_vib in (2, 4):
        for pure in (True, False):
            r = sweep_timing(pure, n_vib, args.points)
            print(f"  N={n_vib} {r['backend']:>9}: {r['seconds'] * 1e3:8.1f} ms")


if __name__ == "__main__":
    main()
