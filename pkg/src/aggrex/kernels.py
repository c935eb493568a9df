"""Kernel dispatch: the compiled extension when importable, else the numpy fallback.

Set ``AGGREX_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

if os.environ.get("AGGREX_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"


def backend(name: str):
    """Return the kernel module called `name` ("cython" or "python")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


dtw = _impl.dtw
dtw_multi = _impl.dtw_multi
pairwise_dtw = _impl.pairwise_dtw
pairwise_sqeuclid = _impl.pairwise_sqeuclid
complete_linkage = _impl.complete_linkage
