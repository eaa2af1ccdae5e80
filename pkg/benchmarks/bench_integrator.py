"""Compare the compiled stepper against the pure-numpy fallback.

Runs the reference operating point and a stiffer variant through both
integrator backends and reports wall time plus agreement of the final
transfer probability. Invoke directly:

    python3 benchmarks/bench_integrator.py [repeats]
"""

import sys
import time

import numpy as np

from valleyqst import _core
from valleyqst._core import stepper_np
from valleyqst.model import baseline
from valleyqst import timedomain


def _run_case(name, params, repeats):
    print(f"case: {name}")
    results = {}
    for label, kernel in (("compiled", _core.integrate_amplitudes),
                          ("numpy", stepper_np.integrate_amplitudes)):
        if label == "compiled" and _core.BACKEND != "cython":
            print("  compiled backend unavailable; skipping")
            continue
        # Route the chosen kernel through the high-level wrapper so the
        # timing includes exactly what users pay per run.
        saved = _core.integrate_amplitudes
        _core.integrate_amplitudes = kernel
        try:
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                traj = timedomain.integrate(params)
                best = min(best, time.perf_counter() - t0)
            total = float(traj.mode_density * np.trapezoid(
                np.sum(np.abs(traj.phi_out) ** 2, axis=0), traj.omega))
            results[label] = (best, total, traj.steps)
            print(f"  {label:<9} {best * 1e3:8.1f} ms   "
                  f"steps={traj.steps:<7d} P={total:.12f}")
        finally:
            _core.integrate_amplitudes = saved
    if len(results) == 2:
        ratio = results["numpy"][0] / results["compiled"][0]
        dp = abs(results["numpy"][1] - results["compiled"][1])
        print(f"  speedup {ratio:.1f}x, |dP| = {dp:.3e}")
    print()


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    print(f"active backend: {_core.BACKEND}\n")
    _run_case("reference point", baseline(), repeats)

    stiff = baseline()
    stiff = stiff.with_(pulse=type(stiff.pulse)(
        omega_ph=stiff.pulse.omega_ph, delta_omega=50.0,
        c=stiff.pulse.c, L=stiff.pulse.L))
    _run_case("wide packet (stiffer drive)", stiff, repeats)


if __name__ == "__main__":
    main()
