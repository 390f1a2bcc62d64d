"""Selects the KL column solver: compiled if available, else pure Python.

Set ``KLCELLS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _klsolve_py
from ._klsolve_py import AntisymmetryError

python_solve_column = _klsolve_py.solve_column
compiled_solve_column = None

try:
    from ._klsolve import solve_column as compiled_solve_column
except ImportError:
    pass

if compiled_solve_column is not None and os.environ.get("KLCELLS_PURE_PYTHON") != "1":
    BACKEND = "cython"
else:
    BACKEND = "python"

__all__ = ["BACKEND", "AntisymmetryError", "python_solve_column", "compiled_solve_column"]
