"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the NumPy
implementation is used.  Set ZBWSIM_BACKEND=python to force the fallback
(useful for the backend benchmark and for debugging).

Only the hot-loop entry points (`gp`, `rk4_const_field`) come from the
compiled module; batched/vectorised helpers are NumPy either way.
"""
from __future__ import annotations

import os

from . import _kernels_py
from .blades import MULT_INDEX, MULT_SIGN, REVERSION_SIGNS

gp_batch = _kernels_py.gp_batch
reversion = _kernels_py.reversion
reversion_batch = _kernels_py.reversion_batch
field_matrix = _kernels_py.field_matrix

if os.environ.get("ZBWSIM_BACKEND", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl
        _impl.init_tables(MULT_INDEX, MULT_SIGN, REVERSION_SIGNS)
    except ImportError:
        _impl = _kernels_py

gp = _impl.gp
rk4_const_field = _impl.rk4_const_field
BACKEND_NAME = _impl.BACKEND_NAME


def backend_name() -> str:
    """Name of the active kernel backend: "c" or "python"."""
    return BACKEND_NAME
