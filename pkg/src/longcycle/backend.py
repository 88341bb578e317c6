"""Kernel backend selection.

The compiled Cython kernel is preferred when importable; otherwise the
numpy twin is used. Set LONGCYCLE_FORCE_PYTHON=1 to force the numpy path
regardless of what is installed.
"""

from __future__ import annotations

import os

from . import _numpy_kernel

if os.environ.get("LONGCYCLE_FORCE_PYTHON", "").strip() not in ("", "0"):
    _impl = _numpy_kernel
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _numpy_kernel


def backend_name() -> str:
    return _impl.NAME


def em_paths(c: float, d: float, dW, dt: float):
    return _impl.em_paths(c, d, dW, dt)
