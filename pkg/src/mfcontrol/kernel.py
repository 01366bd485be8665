"""Backend selection for the plant integration kernel.

The compiled extension is used when it was built; set
``MFCONTROL_PURE_PYTHON=1`` to force the Python fallback.
"""
import os

from . import _kernel_py

if os.environ.get("MFCONTROL_PURE_PYTHON"):
    simulate_period = _kernel_py.simulate_period
    BACKEND = "python"
else:
    try:
        from ._kernel import simulate_period
        BACKEND = "cython"
    except ImportError:
        simulate_period = _kernel_py.simulate_period
        BACKEND = "python"

__all__ = ["simulate_period", "BACKEND"]
