"""Kernel selection: compiled extension when built, numpy otherwise."""
from __future__ import annotations

try:
    from ._kernels_c import nonlinear_step
    KERNEL_BACKEND = "compiled"
except ImportError:
    from ._kernels_py import nonlinear_step
    KERNEL_BACKEND = "python"

__all__ = ["nonlinear_step", "KERNEL_BACKEND"]
