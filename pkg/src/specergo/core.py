"""Dense complex matrices and a general complex eigenvalue solver.

Matrices are plain ``numpy`` complex128 arrays. ``eigenvalues`` runs a
Householder reduction to Hessenberg form followed by single-shift QR with
Wilkinson shifts; the kernel comes from :mod:`specergo._backend`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ._backend import default_backend
from .errors import ConvergenceError

UNIT_MODULUS_TOL = 1e-8
SWEEPS_PER_ROW = 30


@dataclass(frozen=True)
class Provenance:
    kind: Optional[str] = None
    member_index: Optional[int] = None
    seed: Optional[int] = None
    chunk_index: Optional[int] = None
    size_n: Optional[int] = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues of one matrix, in phase order, plus where they came from."""

    values: np.ndarray
    source: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.ndim != 1:
            raise ValueError("eigenvalues must be a 1-d sequence")
        if not np.all(np.isfinite(vals)):
            raise ValueError("eigenvalues must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size_n(self) -> int:
        return self.values.shape[0]

    def max_unit_deviation(self) -> float:
        return float(np.max(np.abs(np.abs(self.values) - 1.0)))

    def check_unit_modulus(self, tol: float = UNIT_MODULUS_TOL) -> None:
        dev = self.max_unit_deviation()
        if dev > tol:
            raise ValueError(f"eigenvalue modulus deviates from 1 by {dev:.3e} (tol {tol:.1e})")


def as_matrix(a: Any) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def conjugate_transpose(a) -> np.ndarray:
    return np.ascontiguousarray(as_matrix(a).conj().T)


def principal_phase(z) -> np.ndarray:
    """Argument in [-pi, pi); +pi folds onto -pi."""
    ph = np.angle(np.asarray(z, dtype=np.complex128))
    return np.where(ph >= np.pi, -np.pi, ph)


def sort_eigenvalues(values) -> np.ndarray:
    """Order by phase in [-pi, pi), ties broken by modulus."""
    values = np.asarray(values, dtype=np.complex128)
    order = np.lexsort((np.abs(values), principal_phase(values)))
    return values[order]


def _solve(m: np.ndarray, backend: str):
    n = m.shape[0]
    max_sweeps = SWEEPS_PER_ROW * n
    if backend == "lapack":
        return np.linalg.eigvals(m), 0
    if backend == "numba":
        from . import _kernels_nb as kern
    elif backend == "numpy":
        from . import _kernels_np as kern
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return kern.eigvals(np.array(m, dtype=np.complex128, order="C"), max_sweeps)


def eigenvalues(a, source: Optional[Provenance] = None, backend: Optional[str] = None) -> EigenSpectrum:
    """All eigenvalues of a square complex matrix, with multiplicity.

    Parameters
    ----------
    a : array_like, shape (n, n)
    source : Provenance, optional
        Attached to the result and to any ``ConvergenceError``.
    backend : {"numba", "numpy", "lapack"}, optional
        Defaults to ``SPECERGO_BACKEND`` (numba when available).

    Raises
    ------
    ValueError
        Non-square or non-finite input.
    ConvergenceError
        More than ``30 * n`` QR sweeps were needed.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    source = source or Provenance()
    vals, sweeps = _solve(m, backend or default_backend())
    if sweeps < 0:
        raise ConvergenceError(
            f"QR iteration did not converge within {SWEEPS_PER_ROW * m.shape[0]} sweeps "
            f"(source: {source.as_dict() or 'unlabelled'})",
            source=source,
        )
    return EigenSpectrum(sort_eigenvalues(vals), source)
