"""Backend selection for the Monte Carlo kernels.

The numba kernels are used by default. Setting ``FBLNET_DISABLE_JIT=1`` in the
environment (before import) or calling :func:`set_backend` switches every
kernel to the pure-numpy implementation. Both paths consume the same
counter-based random stream, so they produce the same samples up to
last-ulp differences in ``log``/``pow``.
"""

from __future__ import annotations

import os

_TRUTHY = {"1", "true", "yes", "on"}

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # identity stand-in so kernel modules still import; only the numpy path runs
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn

_backend = "numpy" if (not HAS_NUMBA or os.environ.get("FBLNET_DISABLE_JIT", "").lower() in _TRUTHY) else "numba"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Select ``"numba"`` or ``"numpy"`` for subsequent kernel calls."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name
