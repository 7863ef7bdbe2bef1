"""Hot-kernel backend selection.

FLOWSCENE_BACKEND=numpy forces the pure-numpy reference lane;
FLOWSCENE_BACKEND=numba requires numba and fails loudly if it is missing.
Unset, numba is used when importable and numpy otherwise. Both lanes share
signatures and arithmetic; ``benchmarks/bench_backends.py`` compares them.
"""

from __future__ import annotations

import os

from ._codes import CLASS_NAMES, CLS_BYPASS, CLS_EXCLUDED, CLS_LONG, CLS_SHORT

_requested = os.environ.get("FLOWSCENE_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"FLOWSCENE_BACKEND={_requested!r} not recognized (use 'numba' or 'numpy')"
    )

if _requested in ("", "numba"):
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _numpy as _impl
        BACKEND = "numpy"
else:
    from . import _numpy as _impl
    BACKEND = "numpy"

splat_gaussian = _impl.splat_gaussian
edt_squared = _impl.edt_squared
attract_pass = _impl.attract_pass
cohesion_pass = _impl.cohesion_pass
gaussian_smooth = _impl.gaussian_smooth
catmull_rom_resample = _impl.catmull_rom_resample
resample_uniform = _impl.resample_uniform

__all__ = [
    "BACKEND",
    "CLASS_NAMES",
    "CLS_BYPASS",
    "CLS_EXCLUDED",
    "CLS_LONG",
    "CLS_SHORT",
    "attract_pass",
    "catmull_rom_resample",
    "cohesion_pass",
    "edt_squared",
    "gaussian_smooth",
    "resample_uniform",
    "splat_gaussian",
]
