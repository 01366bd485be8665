"""Compare the compiled and pure-Python plant kernels.

Runs one control period (60 one-second PWM slots) repeatedly with each
backend, then a full 12 h nominal scenario with each backend in a
subprocess (the backend is fixed at import time).

    python benchmarks/bench_kernel.py
"""
import os
import subprocess
import sys
import timeit

import numpy as np

from mfcontrol import GreenhouseParams, _kernel_py

try:
    from mfcontrol import _kernel
except ImportError:
    _kernel = None

ARGS = (18.0, 60.0, np.r_[np.ones(12, bool), np.zeros(48, bool)], np.r_[np.ones(9, bool), np.zeros(51, bool)],
        0.0, 0.0, (5.0, 60.0, 0.0, 3.0), (4.9, 60.1, 0.0, 3.0), GreenhouseParams().as_tuple(), 60.0, 1)

FULL_RUN = ("import time; from mfcontrol import builtin_scenario, run_scenario, BACKEND; "
            "sc = builtin_scenario('nominal_ip'); t = time.perf_counter(); run_scenario(sc); "
            "print(BACKEND, time.perf_counter() - t)")


def main():
    n = 200
    backends = [("python", _kernel_py.simulate_period)]
    if _kernel is not None:
        backends.append(("cython", _kernel.simulate_period))
    else:
        print("compiled kernel not built; only the Python fallback is timed")
    ref = None
    for name, fn in backends:
        out = fn(*ARGS)
        ref = ref or out
        per = timeit.timeit(lambda: fn(*ARGS), number=n) / n
        print(f"{name:7s} one period: {per * 1e6:9.1f} us   result {out}  identical={out == ref}")
    for forced in ("", "1"):
        env = {**os.environ, "MFCONTROL_PURE_PYTHON": forced}
        res = subprocess.run([sys.executable, "-c", FULL_RUN], env=env, capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        print(f"{backend:7s} 12 h nominal scenario: {float(secs):.3f} s")


if __name__ == "__main__":
    main()
