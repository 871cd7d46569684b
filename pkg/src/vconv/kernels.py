"""Kernel backend selection.

The compiled extension is used when it has been built; otherwise the numpy
fallback is imported.  Setting ``VCONV_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("VCONV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

batch_sup = _impl.batch_sup
diameter = _impl.diameter
tail_scan = _impl.tail_scan
abel_sums = _impl.abel_sums


def backends() -> dict:
    """All importable backends by name, for comparisons and benchmarks."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
