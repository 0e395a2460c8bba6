"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the NumPy
implementation takes over with identical semantics. Setting
``PITCHOPT_BACKEND=python`` forces the fallback. ``BACKEND`` names the
active one.
"""

import os

from . import _kernels_py as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and \
        os.environ.get("PITCHOPT_BACKEND", "").lower() != "python":
    _active, BACKEND = compiled_backend, "cython"
else:
    _active, BACKEND = python_backend, "python"

bet_loads = _active.bet_loads
rk4_advance = _active.rk4_advance

__all__ = ["BACKEND", "bet_loads", "rk4_advance", "compiled_backend",
           "python_backend"]
