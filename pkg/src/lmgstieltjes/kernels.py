"""Backend selection for the numerical kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``LMGSTIELTJES_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the numpy implementation is used. ``BACKEND`` names
the active choice.
"""
import os
from contextlib import contextmanager

from . import _kernels_py

if os.environ.get("LMGSTIELTJES_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

jacobi_values = _impl.jacobi_values
aberth_jacobi = _impl.aberth_jacobi
twisted_log_vector = _impl.twisted_log_vector
bae_newton = _impl.bae_newton
tql_eigenvalues = _impl.tql_eigenvalues


def backends():
    """Mapping of available backend name -> kernel module."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out


_NAMES = ("jacobi_values", "aberth_jacobi", "twisted_log_vector", "bae_newton", "tql_eigenvalues")


@contextmanager
def use_backend(name):
    """Temporarily route every kernel call through backend ``name``."""
    global BACKEND
    mod = backends()[name]
    g = globals()
    saved = {n: g[n] for n in _NAMES}, BACKEND
    g.update({n: getattr(mod, n) for n in _NAMES})
    BACKEND = name
    try:
        yield mod
    finally:
        g.update(saved[0])
        BACKEND = saved[1]
