"""Kernel backend selection.

All numerical kernels in ``pathcert._kernels`` are written as plain Python
functions over numpy arrays and scalars.  By default they are compiled with
numba's ``@njit(cache=True)``.  Setting the environment variable

    PATHCERT_BACKEND=numpy

runs the identical function bodies un-jitted (pure Python/numpy), which is
useful on machines without a working numba install and for benchmarking the
compiled kernels against their interpreted twins.  Both paths execute the
same floating-point operations, so results are bit-identical.
"""

import logging
import os

_log = logging.getLogger("pathcert")

_ENV_VAR = "PATHCERT_BACKEND"
_choice = os.environ.get(_ENV_VAR, "numba").strip().lower()
if _choice not in ("numba", "numpy"):
    raise ValueError(
        f"{_ENV_VAR} must be 'numba' or 'numpy', got {_choice!r}"
    )

USE_NUMBA = _choice == "numba"

if USE_NUMBA:
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - exercised only without numba
        _log.warning("numba not importable, falling back to numpy backend")
        _numba = None
        USE_NUMBA = False


def backend_name():
    """Name of the active kernel backend: 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"


def jit_kernel(func):
    """Compile ``func`` with numba if the numba backend is active.

    On the numpy backend the function is returned unchanged.  Jitted
    kernels keep the original under ``.py_func`` (numba convention), which
    the backend benchmark uses to time both implementations.
    """
    if USE_NUMBA:
        return _numba.njit(cache=True)(func)
    return func
