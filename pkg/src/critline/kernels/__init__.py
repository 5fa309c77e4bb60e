"""Hot numeric kernels with a selectable backend.

``CRITLINE_BACKEND=numba`` (the default when numba imports) compiles the loop
kernels in ``_loops`` with ``njit``; ``CRITLINE_BACKEND=numpy`` uses the
vectorised kernels in ``_vector``. Both expose the same functions.
"""
import os
from types import SimpleNamespace

from . import _loops, _vector

KERNEL_NAMES = (
    "neumaier_sum",
    "dirichlet_sum",
    "integral_sum",
    "mobius_sieve",
    "sigma_sieve",
    "harmonic_numbers",
    "bareiss_det",
)

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False


def _build_numba():
    jit = numba.njit(cache=True, nogil=True)
    # helpers called from other kernels must be compiled first
    for helper in ("cexpm1", "_term_closed", "series_coefficients"):
        setattr(_loops, helper, jit(getattr(_loops, helper)))
    return SimpleNamespace(name="numba", **{k: jit(getattr(_loops, k)) for k in KERNEL_NAMES})


NUMPY = SimpleNamespace(name="numpy", **{k: getattr(_vector, k) for k in KERNEL_NAMES})
NUMBA = _build_numba() if NUMBA_AVAILABLE else None


def select(name=None):
    """Return the kernel namespace for ``name`` (or the environment choice)."""
    name = (name or os.environ.get("CRITLINE_BACKEND", "numba")).strip().lower()
    if name == "numba" and NUMBA is not None:
        return NUMBA
    if name in ("numba", "numpy"):
        return NUMPY
    raise ValueError(f"unknown CRITLINE_BACKEND {name!r}; expected 'numba' or 'numpy'")


active = select()
BACKEND = active.name
