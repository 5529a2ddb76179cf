"""Backend selection for the iteration kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is. Setting ``QSODYN_PURE_PYTHON=1`` forces the fallback.
"""

import os

if os.environ.get("QSODYN_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

step = _impl.step
trajectory = _impl.trajectory
advance = _impl.advance

__all__ = ["BACKEND", "advance", "step", "trajectory"]
