"""Backend switch for the compiled kernels.

Numba is used when importable unless ``BRAIDSIG_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs through its numpy path.
"""
from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None

_flag = os.environ.get("BRAIDSIG_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = NUMBA_AVAILABLE and _flag not in ("1", "true", "yes", "on")


def njit(func):
    """Compile ``func`` in nopython mode, or hand it back untouched."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
