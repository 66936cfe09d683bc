"""Optional numba acceleration.

Set ``EQMORSE_DISABLE_NUMBA=1`` to force the pure-numpy kernels.  The flag is
read once, at import time.
"""

import os

_DISABLED = os.environ.get("EQMORSE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by EQMORSE_DISABLE_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def njit(fn):
    """``numba.njit(cache=True)`` when available, identity otherwise."""
    if HAVE_NUMBA:
        return _njit(cache=True)(fn)
    return fn


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
