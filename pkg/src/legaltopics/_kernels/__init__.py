"""Kernel backend selection.

Prefers the compiled Cython extensions; falls back to the pure-Python
implementations when they are not built. ``BACKEND`` reports which one is
active ("compiled", "mixed" or "python"). Set ``LEGALTOPICS_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import fallback

_force_py = os.environ.get("LEGALTOPICS_PURE_PYTHON", "") == "1"

try:
    if _force_py:
        raise ImportError("pure-python forced")
    from ._edit_c import edit_counts_kernel
    _edit_backend = "compiled"
except ImportError:
    edit_counts_kernel = fallback.edit_counts_kernel
    _edit_backend = "python"

try:
    if _force_py:
        raise ImportError("pure-python forced")
    from ._layout_c import optimize_layout_kernel
    _layout_backend = "compiled"
except ImportError:
    optimize_layout_kernel = fallback.optimize_layout_kernel
    _layout_backend = "python"

if _edit_backend == _layout_backend:
    BACKEND = _edit_backend
else:
    BACKEND = "mixed"

__all__ = ["edit_counts_kernel", "optimize_layout_kernel", "BACKEND"]
