"""Kernel backend selection.

Imports the compiled torus kernels when the extension built, otherwise the
pure-Python twin.  Set PTHETA_PURE_PYTHON=1 to force the fallback (used by
the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("PTHETA_PURE_PYTHON"):
    from . import _corepy as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _corepy as _impl

BACKEND: str = _impl.BACKEND
torus_point = _impl.torus_point
torus_point2 = _impl.torus_point2
torus_grid_min = _impl.torus_grid_min
torus_descent = _impl.torus_descent
