"""Backend selection for the hot loops.

The compiled extension ``_kernels`` is used when it imports; otherwise the
pure-Python twins in ``_kernels_py`` are used.  Setting the environment
variable ``NANOTUBE_SPECTRA_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("NANOTUBE_SPECTRA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

BACKEND = "cython" if compiled_backend is not None else "python"
_active = compiled_backend if compiled_backend is not None else python_backend


def seven_multinomial_sum(p: int, q: int, k: int) -> int:
    if compiled_backend is not None and k <= compiled_backend.MAX_SEVEN_K:
        return compiled_backend.seven_multinomial_sum(p, q, k)
    return python_backend.seven_multinomial_sum(p, q, k)


def jacobi_eigen(a, tol: float, max_sweeps: int, want_vectors: bool):
    return _active.jacobi_eigen(a, tol, max_sweeps, want_vectors)
