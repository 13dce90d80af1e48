"""Numba acceleration switch.

Hot kernels are compiled with numba by default. Set ``QCOHERE_NUMBA=0``
(or ``false``/``off``/``no``) before import to force the pure-numpy
fallback everywhere; the flag is read once at import time.
"""

import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None


def _flag_enabled() -> bool:
    raw = os.environ.get("QCOHERE_NUMBA", "1").strip().lower()
    return raw not in ("0", "false", "off", "no")


NUMBA_AVAILABLE = _numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and _flag_enabled()


def maybe_jit(**kwargs):
    """Return ``numba.njit(**kwargs)`` when enabled, else the identity decorator."""

    def decorate(fn):
        if NUMBA_ENABLED:
            return _numba.njit(**kwargs)(fn)
        return fn

    return decorate
