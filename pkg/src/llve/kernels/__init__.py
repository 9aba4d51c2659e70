"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is picked once at import time: numba when importable, unless
the environment variable ``LLVE_NO_NUMBA`` is set to a truthy value.
Both backends accumulate in the same order: linear kernels agree bitwise,
pow within one ulp.
"""

import os

_DISABLE = os.environ.get("LLVE_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

if _DISABLE:
    from . import numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl

        BACKEND = "numpy"

conv2d = _impl.conv2d
bilinear_resize = _impl.bilinear_resize
warp_bilinear = _impl.warp_bilinear
pow_map = _impl.pow_map

__all__ = ["BACKEND", "conv2d", "bilinear_resize", "warp_bilinear", "pow_map"]
