"""Select the compiled kernels when available, else the pure-Python twins.

Set ``TURNPOINT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if os.environ.get("TURNPOINT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

airy_maclaurin = kernels.airy_maclaurin
taylor_integrate = kernels.taylor_integrate

__all__ = ["BACKEND", "airy_maclaurin", "taylor_integrate", "kernels"]
