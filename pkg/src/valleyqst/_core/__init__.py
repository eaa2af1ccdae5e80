"""Integration kernel with a compiled fast path.

The Cython extension and the numpy module implement the identical
Dormand-Prince 5(4) scheme; whichever imports first is used. Set
``VALLEYQST_PURE=1`` to force the numpy implementation, e.g. to compare
the two backends or to sidestep a broken build.
"""

import os

from .stepper_np import (
    STATUS_DT_UNDERFLOW,
    STATUS_EARLY_STOP,
    STATUS_OK,
    STATUS_STEP_BUDGET,
)
from .stepper_np import integrate_amplitudes as integrate_amplitudes_np

if os.environ.get("VALLEYQST_PURE", "0").strip() not in ("", "0"):
    integrate_amplitudes = integrate_amplitudes_np
    BACKEND = "numpy"
else:
    try:
        from ._stepper import integrate_amplitudes

        BACKEND = "cython"
    except ImportError:
        integrate_amplitudes = integrate_amplitudes_np
        BACKEND = "numpy"

__all__ = [
    "BACKEND",
    "STATUS_DT_UNDERFLOW",
    "STATUS_EARLY_STOP",
    "STATUS_OK",
    "STATUS_STEP_BUDGET",
    "integrate_amplitudes",
    "integrate_amplitudes_np",
]
