"""Kernel backend selection.

``SPECERGO_BACKEND`` picks the eigensolver implementation:

* ``numba``  -- jit-compiled loops (default when numba imports)
* ``numpy``  -- the same algorithm written with vectorised numpy slices
* ``lapack`` -- ``numpy.linalg.eigvals`` (zgeev), handy for full-scale runs
"""
import os

BACKENDS = ("numba", "numpy", "lapack")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def default_backend():
    name = os.environ.get("SPECERGO_BACKEND", "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"SPECERGO_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("SPECERGO_BACKEND=numba but numba is not installed")
    return name
