"""Kernel backend selection: compiled Cython if available, numpy otherwise.

Set GCFLOW_PURE_PYTHON=1 to force the numpy fallback.
"""

import os

if os.environ.get("GCFLOW_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

curvature_2d = _impl.curvature_2d
curvature_3d = _impl.curvature_3d
shrink_step = _impl.shrink_step
