"""Select the tableau kernels: compiled extension if importable, else Python.

Set ``PSAT_PURE_PYTHON=1`` to force the pure-Python kernels.
"""

import os

from . import _kernels_py

python_kernels = _kernels_py
compiled_kernels = None

if not os.environ.get("PSAT_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels  # type: ignore[no-redef]
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "cython" if compiled_kernels is not None else "python"
