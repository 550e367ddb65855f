"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-numpy kernels when
the extension is missing or MAJEX_PURE_PYTHON=1 is set. Both expose the
same four in-place kernels, so everything above this module is agnostic.
"""
from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("MAJEX_PURE_PYTHON") == "1":
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

apply_1q = _impl.apply_1q
apply_cx = _impl.apply_cx
prob_one = _impl.prob_one
collapse = _impl.collapse

BACKEND_NAME: str = _impl.BACKEND_NAME


def get_backend(name: str):
    """Return a specific kernel module ("python" or "cython"), for benchmarks."""
    if name == "python":
        return _kernel_py
    if name == "cython":
        from . import _kernel

        return _kernel
    raise ValueError(f"unknown backend {name!r}")
