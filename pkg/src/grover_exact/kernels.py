"""Hot-loop backend, chosen once at import.

The compiled ``_kernels`` extension is used when it imports; otherwise, or
when ``GROVER_EXACT_PURE_PYTHON`` is set to a non-empty value, the numpy
module ``_purepy`` is used.  Both expose the same four functions.
"""
import importlib
import os

from . import _purepy

__all__ = [
    "BACKEND",
    "available_backends",
    "get_backend",
    "success_grid",
    "last_failure_indices",
    "evolve_statevector",
    "marked_population",
]


def get_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _purepy
    if name == "cython":
        return importlib.import_module("grover_exact._kernels")
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        get_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("GROVER_EXACT_PURE_PYTHON"):
    _impl, BACKEND = _purepy, "python"
else:
    try:
        _impl, BACKEND = get_backend("cython"), "cython"
    except ImportError:
        _impl, BACKEND = _purepy, "python"

success_grid = _impl.success_grid
last_failure_indices = _impl.last_failure_indices
evolve_statevector = _impl.evolve_statevector
marked_population = _impl.marked_population
