"""Backend selection for the numeric kernels.

``UORDKIT_BACKEND=numpy`` forces the pure-numpy path; ``numba`` (or the
default ``auto``) uses the JIT kernels when numba is importable.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("UORDKIT_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(f"UORDKIT_BACKEND must be auto, numba or numpy, not {_requested!r}")

_backend = "numba" if HAVE_NUMBA and _requested != "numpy" else "numpy"


def njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend():
    return _backend


def set_backend(name):
    """Switch backend at runtime; returns the previous one."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous
