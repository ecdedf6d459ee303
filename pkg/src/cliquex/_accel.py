"""JIT selection.

Hot kernels are written once as plain Python over numpy scalars and arrays.
With numba available they are compiled with ``njit``; setting
``CLIQUEX_DISABLE_JIT=1`` runs the very same functions in the interpreter, which
is the pure-numpy path used for debugging and for the fallback benchmark.
"""

import functools
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("CLIQUEX_DISABLE_JIT", "") not in ("1", "true", "yes")


def kernel(func):
    """Compile ``func`` with numba, or wrap it for uint64 wraparound in Python."""
    if JIT_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)

    @functools.wraps(func)
    def wrapper(*args):
        # numpy warns on scalar uint64 overflow; the kernels rely on wraparound.
        with np.errstate(over="ignore"):
            return func(*args)

    wrapper.py_func = func
    return wrapper
