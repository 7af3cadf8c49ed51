"""Kernel backend selection.

The compiled extension is preferred; set ``MIMO_LSA_PURE_PYTHON=1`` to force
the numpy fallback.
"""
import os

from . import _fallback

_impl = _fallback
if not os.environ.get("MIMO_LSA_PURE_PYTHON"):
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"

box_muller = _impl.box_muller
lms_run = _impl.lms_run


def available_backends():
    """Return ``{name: module}`` for every importable backend."""
    backends = {"python": _fallback}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels
    return backends
