"""numba switch.

Set ``TOPICFLOW_DISABLE_NUMBA=1`` to run every kernel on the pure numpy path.
"""
import logging
import os

_FLAG = "TOPICFLOW_DISABLE_NUMBA"

try:
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes")


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=False, nogil=True)(func)
