"""Numba acceleration switch.

Hot kernels in :mod:`levy_breakdrift._kernels` come in two flavours: a numba
``@njit`` loop version and a vectorized pure-numpy version.  The environment
variable ``LEVY_BREAKDRIFT_NO_NUMBA`` (set to ``1``/``true``) forces the numpy
fallback; otherwise numba is used when importable.  ``LEVY_BREAKDRIFT_THREADS``
caps the numba threading layer.
"""

import os

__all__ = ["NUMBA_ENABLED", "njit"]


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_ENABLED = not _env_flag("LEVY_BREAKDRIFT_NO_NUMBA")

if NUMBA_ENABLED:
    try:
        import numba
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    _threads = os.environ.get("LEVY_BREAKDRIFT_THREADS", "").strip()
    if _threads:
        try:
            numba.set_num_threads(max(1, int(_threads)))
        except (ValueError, RuntimeError):
            pass
else:
    def njit(*args, **kwargs):
        """No-op decorator used when numba is disabled."""
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap
