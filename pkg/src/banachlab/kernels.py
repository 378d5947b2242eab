"""Selects the compiled scan kernels when the extension is built, numpy otherwise.

Set BANACHLAB_KERNELS=python to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("BANACHLAB_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def use(backend: str):
    """Switch implementations at runtime ('cython' or 'python')."""
    global _impl, BACKEND
    if backend == "python":
        _impl, BACKEND = _kernels_py, "python"
    elif backend == "cython":
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        _impl, BACKEND = _compiled, "cython"
    else:
        raise ValueError(f"unknown kernel backend {backend!r}")


def scan_delta_x(*args):
    return _impl.scan_delta_x(*args)


def scan_rho(*args):
    return _impl.scan_rho(*args)


def scan_ns(*args):
    return _impl.scan_ns(*args)


def scan_uacs(*args):
    return _impl.scan_uacs(*args)
