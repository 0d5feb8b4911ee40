"""Kernel selection: compiled extension when available, numpy otherwise.

Set ZENOCOUPLER_FORCE_PY_KERNEL=1 to force the pure-Python fallback
(used by the benchmark and the kernel-equivalence tests).
"""

import os

if os.environ.get("ZENOCOUPLER_FORCE_PY_KERNEL"):
    from ._genapply_py import apply_generator

    KERNEL_BACKEND = "python"
else:
    try:
        from ._genapply import apply_generator

        KERNEL_BACKEND = "cython"
    except ImportError:
        from ._genapply_py import apply_generator

        KERNEL_BACKEND = "python"

__all__ = ["apply_generator", "KERNEL_BACKEND"]
