"""Select the exact-cover kernel at import time.

The compiled kernel (``chie._kernel``) is used for regions of up to 64
quarter cells when it is importable and ``CHIE_PURE_PYTHON`` is not set;
otherwise the pure-Python kernel runs.  Both visit nodes in the same order.
"""
from __future__ import annotations

import os

from . import _kernel_py

try:
    if os.environ.get("CHIE_PURE_PYTHON") == "1":
        raise ImportError("disabled by CHIE_PURE_PYTHON")
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def solve(ncells, mults, table, max_solutions=0, node_limit=0, callback=None, backend=None):
    use = backend or BACKEND
    if use == "cython" and _compiled is not None and ncells <= 64:
        return _compiled.solve(ncells, mults, table, max_solutions, node_limit, callback)
    return _kernel_py.solve(ncells, mults, table, max_solutions, node_limit, callback)
