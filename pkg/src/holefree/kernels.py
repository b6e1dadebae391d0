"""Backend selection for the hot loops.

The compiled module is used when it was built and ``HOLEFREE_PURE`` is not
set to ``1``; otherwise the pure-Python implementations are used. Both give
identical results.
"""

from __future__ import annotations

import os

from holefree import _pykernels

if os.environ.get("HOLEFREE_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from holefree import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND

box_violation = _impl.box_violation
hull2d = _impl.hull2d
holefree_scan_2d = _impl.holefree_scan_2d
empty_polygon_dp = _impl.empty_polygon_dp
brute_max_hole_2d = _impl.brute_max_hole_2d
count_holes_2d = _impl.count_holes_2d


def backends() -> dict:
    """All importable backends by name, for cross-checks and benchmarks."""
    out = {"python": _pykernels}
    try:
        from holefree import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
