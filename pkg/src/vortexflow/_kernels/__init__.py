"""Flux-kernel backend selection.

The compiled Cython core is preferred when it was built; the NumPy
implementation is the always-available fallback.  Set VORTEXFLOW_PURE=1 to
force the fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

from . import _numpy_impl

LIMITER_FROMM = _numpy_impl.LIMITER_FROMM
LIMITER_MINMOD = _numpy_impl.LIMITER_MINMOD

if os.environ.get("VORTEXFLOW_PURE", "").strip() not in ("", "0"):
    _impl = _numpy_impl
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _numpy_impl
        BACKEND = "python"

bernoulli = _impl.bernoulli
sg_fluxes = _impl.sg_fluxes
sg_tendency = _impl.sg_tendency
advect_tendency = _impl.advect_tendency
