"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; ``JANOSSY_BACKEND=python``
forces the pure-Python kernels.
"""
import os

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_forced = os.environ.get("JANOSSY_BACKEND", "").strip().lower()
if _forced not in ("", "cython", "python"):
    raise ImportError(f"JANOSSY_BACKEND must be 'cython' or 'python', not {_forced!r}")
if _forced == "cython" and _core is None:
    raise ImportError("JANOSSY_BACKEND=cython but janossy._core is not built")

kernels = _pycore if (_forced == "python" or _core is None) else _core
BACKEND = "python" if kernels is _pycore else "cython"


def available():
    """Names of the backends importable in this environment."""
    return ["cython", "python"] if _core is not None else ["python"]


def get(name):
    if name == "python":
        return _pycore
    if name == "cython" and _core is not None:
        return _core
    raise ValueError(f"backend {name!r} not available")


def name_of(module):
    return "python" if module is _pycore else "cython"
