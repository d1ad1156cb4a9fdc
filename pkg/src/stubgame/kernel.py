"""Select the successor kernel: compiled if available, else pure Python.

``STUBGAME_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernel_py

if os.environ.get("STUBGAME_PURE_PYTHON"):
    NetKernel = _kernel_py.NetKernel
    BACKEND = "python"
else:
    try:
        from ._kernel import NetKernel
        BACKEND = "cython"
    except ImportError:
        NetKernel = _kernel_py.NetKernel
        BACKEND = "python"

PyNetKernel = _kernel_py.NetKernel

__all__ = ["NetKernel", "PyNetKernel", "BACKEND"]
