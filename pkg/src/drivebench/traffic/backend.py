"""Stepping-backend selection: compiled kernel if built, pure Python otherwise.

Set ``DRIVEBENCH_PURE=1`` to force the pure-Python kernel even when the
extension is available (useful for benchmarking and parity checks).
"""

import os

from drivebench.traffic import _pystep

if os.environ.get("DRIVEBENCH_PURE") == "1":
    _BACKEND = "python"
    step_longitudinal = _pystep.step_longitudinal
else:
    try:
        from drivebench.traffic import _kernel

        _BACKEND = "compiled"
        step_longitudinal = _kernel.step_longitudinal
    except ImportError:
        _BACKEND = "python"
        step_longitudinal = _pystep.step_longitudinal


def stepping_backend() -> str:
    """Which kernel is active: "compiled" or "python"."""
    return _BACKEND


def pure_step():
    """The pure-Python kernel, regardless of the active backend."""
    return _pystep.step_longitudinal


def compiled_step():
    """The compiled kernel, or None if the extension is not built."""
    try:
        from drivebench.traffic import _kernel
    except ImportError:
        return None
    return _kernel.step_longitudinal
