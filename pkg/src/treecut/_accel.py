"""Numba switch.

Hot loops are written once in the numba-compatible subset of Python. When
``TREECUT_DISABLE_NUMBA`` is set to a non-empty value other than ``0`` the
decorator is a no-op, the loops run interpreted, and the modules that have a
vectorized numpy alternative (treefix sums, the dense pair table) use it.
"""
import os

USE_NUMBA = os.environ.get("TREECUT_DISABLE_NUMBA", "") in ("", "0")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(fn=None, **kwargs):
    """``numba.njit(cache=True, nogil=True)`` or identity when disabled."""
    opts = {"cache": True, "nogil": True}
    opts.update(kwargs)

    def wrap(f):
        if not USE_NUMBA:
            return f
        return numba.njit(**opts)(f)

    if fn is not None:
        return wrap(fn)
    return wrap
