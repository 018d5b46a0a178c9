"""Numba switch.

Set ``AREAL_MAHLER_NUMBA=0`` to force the pure-numpy kernels. The flag is read
once at import time.
"""
import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("AREAL_MAHLER_NUMBA", "1").strip().lower() not in (
    "0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, otherwise a no-op decorator.

    Kernels are always decorated so both paths can be benchmarked side by side;
    whether the compiled one is *dispatched* is decided by ``USE_NUMBA``.
    """
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
