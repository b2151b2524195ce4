"""Kernel selection at import time.

The compiled extension is used when it was built and ``TORICLIFT_PURE`` is
unset; otherwise the pure-Python fallback is used.  Inputs whose magnitudes
could overflow 64-bit arithmetic always take the fallback.
"""
import os

from . import _fallback

try:
    if os.environ.get("TORICLIFT_PURE"):
        raise ImportError("pure-Python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_LIMIT = 1 << 60


def _fits_int64(rays, bounds, lo, hi):
    span = max([abs(x) for x in list(lo) + list(hi)] or [0])
    vmax = max([abs(x) for v in rays for x in v] or [0])
    bmax = max([abs(b) for b in bounds] or [0])
    return len(rays) <= 64 and span * vmax * max(len(lo), 1) < _LIMIT and bmax < _LIMIT


def classify_weights(rays, bounds, lo, hi, backend=None):
    backend = backend or BACKEND
    rays = [tuple(int(x) for x in v) for v in rays]
    bounds = [int(b) for b in bounds]
    lo, hi = [int(x) for x in lo], [int(x) for x in hi]
    if backend == "compiled" and _compiled is not None and lo and _fits_int64(rays, bounds, lo, hi):
        return _compiled.classify_weights(rays, bounds, lo, hi)
    return _fallback.classify_weights(rays, bounds, lo, hi)
