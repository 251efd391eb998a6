"""Phase densities, the per-bin fluctuation statistic Omega, and D_se.

For an ensemble of M spectra of N eigenvalues each, binned on a shared
phase grid with K bins::

    rho_bar[k] = mean_j rho_j[k]
    Omega[k]   = sum_j (rho_j[k] - rho_bar[k])**2 / (M * N)

and two Omega vectors are compared with the symmetrised base-2 KL sum::

    D_se(a, b) = KL(a || b) + KL(b || a),  KL(a || b) = sum_k a_k log2(a_k / b_k)

Omega vectors are not normalised before the KL sum; zero bins are floored at
``epsilon`` on both sides.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import EigenSpectrum, as_matrix, conjugate_transpose, eigenvalues, principal_phase
from .ensembles import EnsembleKind, EnsembleSpec, generate_ensemble
from .errors import DegenerateInputError

log = logging.getLogger(__name__)

DEFAULT_BINS = 32
DEFAULT_EPSILON = 1e-12


@dataclass(frozen=True)
class BinGrid:
    """Uniform half-open bins on [lower, upper); phases by default."""

    k_bins: int = DEFAULT_BINS
    lower: float = -np.pi
    upper: float = np.pi

    def __post_init__(self):
        if int(self.k_bins) < 1:
            raise ValueError("k_bins must be >= 1")
        if not self.upper > self.lower:
            raise ValueError("grid upper bound must exceed lower bound")

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.k_bins + 1)

    @property
    def width(self) -> float:
        return (self.upper - self.lower) / self.k_bins

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    def bin_index(self, x) -> np.ndarray:
        """Bin of each value; values outside [lower, upper) raise."""
        x = np.asarray(x, dtype=np.float64)
        idx = np.searchsorted(self.edges, x, side="right") - 1
        if np.any(idx < 0) or np.any(idx >= self.k_bins):
            raise ValueError("value outside the bin grid")
        return idx

    def histogram_density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.size == 0:
            raise ValueError("cannot bin an empty sample")
        counts = np.bincount(self.bin_index(x), minlength=self.k_bins)
        return counts / (x.size * self.width)


@dataclass(frozen=True)
class SpectralDensity:
    grid: BinGrid
    values: np.ndarray
    member_index: Optional[int] = None


@dataclass(frozen=True)
class MeanDensity:
    grid: BinGrid
    values: np.ndarray
    count_m: int


@dataclass(frozen=True)
class OmegaDistribution:
    grid: BinGrid
    values: np.ndarray
    size_n: int
    count_m: int
    kind: Optional[EnsembleKind] = None
    logical_n: Optional[int] = None

    @property
    def is_degenerate(self) -> bool:
        """All-zero Omega (e.g. M = 1); D_se against it is undefined."""
        return not np.any(self.values > 0)

    @property
    def label_n(self) -> int:
        return self.logical_n if self.logical_n is not None else self.size_n


@dataclass(frozen=True)
class ErgodicityCascade:
    kind: Optional[EnsembleKind]
    pairs: tuple  # ((n_a, n_b, d_se), ...)

    @property
    def distances(self) -> np.ndarray:
        return np.array([p[2] for p in self.pairs])

    def is_strictly_decreasing(self) -> bool:
        d = self.distances
        return bool(np.all(d[1:] < d[:-1]))


# -- densities --------------------------------------------------------------

def phase_density(spectrum: EigenSpectrum, grid: BinGrid) -> SpectralDensity:
    """Normalised histogram of eigenvalue arguments on ``grid``."""
    vals = spectrum.values
    if vals.size == 0:
        raise ValueError("empty spectrum")
    dens = grid.histogram_density(principal_phase(vals))
    return SpectralDensity(grid, dens, spectrum.source.member_index)


def _stack(densities: Sequence[SpectralDensity]):
    densities = list(densities)
    if not densities:
        raise ValueError("need at least one density")
    grid = densities[0].grid
    for d in densities[1:]:
        if d.grid != grid:
            raise ValueError("densities are on different bin grids")
    return grid, np.vstack([d.values for d in densities])


def mean_density(densities: Sequence[SpectralDensity]) -> MeanDensity:
    grid, rho = _stack(densities)
    return MeanDensity(grid, rho.mean(axis=0), rho.shape[0])


def omega(densities: Sequence[SpectralDensity], size_n: int, kind=None,
          logical_n: Optional[int] = None) -> OmegaDistribution:
    """Per-bin fluctuation of member densities around their mean.

    ``size_n`` is the eigenvalue count per member (the matrix dimension,
    ``2N`` for CSE) and enters the ``1 / (M * N)`` prefactor.
    """
    if size_n < 1:
        raise ValueError("size_n must be >= 1")
    grid, rho = _stack(densities)
    m = rho.shape[0]
    rho_bar = mean_density(densities).values
    vals = np.sum((rho - rho_bar) ** 2, axis=0) / (m * size_n)
    out = OmegaDistribution(grid, vals, int(size_n), m,
                            EnsembleKind(kind) if kind is not None else None, logical_n)
    if out.is_degenerate:
        log.warning("Omega is identically zero (M=%d); distances against it are undefined", m)
    return out


def omega_from_spectra(spectra: Sequence[EigenSpectrum], grid: BinGrid, kind=None,
                       logical_n: Optional[int] = None) -> OmegaDistribution:
    spectra = list(spectra)
    sizes = {s.size_n for s in spectra}
    if len(sizes) != 1:
        raise ValueError(f"spectra have mixed sizes {sorted(sizes)}")
    dens = [phase_density(s, grid) for s in spectra]
    return omega(dens, sizes.pop(), kind, logical_n)


# -- distances --------------------------------------------------------------

def _floored_pair(a: OmegaDistribution, b: OmegaDistribution, epsilon: float):
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if a.grid != b.grid:
        raise ValueError("Omega distributions are on different bin grids")
    va = np.asarray(a.values, dtype=np.float64)
    vb = np.asarray(b.values, dtype=np.float64)
    if np.all(va < epsilon) and np.all(vb < epsilon):
        raise DegenerateInputError("both Omega distributions lie entirely below epsilon")
    return np.maximum(va, epsilon), np.maximum(vb, epsilon)


def kl(omega_a: OmegaDistribution, omega_b: OmegaDistribution,
       epsilon: float = DEFAULT_EPSILON) -> float:
    pa, pb = _floored_pair(omega_a, omega_b, epsilon)
    return float(np.sum(pa * np.log2(pa / pb)))


def d_se(omega_a: OmegaDistribution, omega_b: OmegaDistribution,
         epsilon: float = DEFAULT_EPSILON) -> float:
    pa, pb = _floored_pair(omega_a, omega_b, epsilon)
    # (hi - lo) * log2(hi / lo) per bin: same value as KL(a||b) + KL(b||a),
    # bit-identical under argument swap and never negative
    hi, lo = np.maximum(pa, pb), np.minimum(pa, pb)
    return float(np.sum((hi - lo) * np.log2(hi / lo)))


def cascade_from_omegas(omegas: Sequence[OmegaDistribution],
                        epsilon: float = DEFAULT_EPSILON) -> ErgodicityCascade:
    omegas = list(omegas)
    if len(omegas) < 2:
        raise ValueError("a cascade needs at least two sizes")
    kinds = {o.kind for o in omegas}
    kind = kinds.pop() if len(kinds) == 1 else None
    pairs = tuple(
        (a.label_n, b.label_n, d_se(a, b, epsilon)) for a, b in zip(omegas, omegas[1:])
    )
    return ErgodicityCascade(kind, pairs)


def cascade(specs: Sequence[EnsembleSpec], grid: BinGrid, epsilon: float = DEFAULT_EPSILON,
            workers: Optional[int] = 1, ensembles=None, backend: Optional[str] = None
            ) -> ErgodicityCascade:
    """D_se over consecutive sizes of one ensemble kind.

    ``ensembles`` may map a spec to already generated spectra; any spec
    missing from it is generated.
    """
    specs = list(specs)
    if len(specs) < 2:
        raise ValueError("a cascade needs at least two sizes")
    if len({s.kind for s in specs}) != 1 or len({s.count_m for s in specs}) != 1:
        raise ValueError("cascade specs must share kind and ensemble size")
    if any(b.size_n < a.size_n for a, b in zip(specs, specs[1:])):
        raise ValueError("cascade specs must be sorted by size")
    ensembles = ensembles or {}
    omegas = []
    for spec in specs:
        spectra = ensembles.get(spec)
        if spectra is None:
            spectra = generate_ensemble(spec, workers, backend)
        omegas.append(omega_from_spectra(spectra, grid, spec.kind, spec.size_n))
    return cascade_from_omegas(omegas, epsilon)


# -- rectangular weights ----------------------------------------------------

def gram_spectrum(w, backend: Optional[str] = None) -> EigenSpectrum:
    """Eigenvalues of ``W^H W`` (squared singular values), real and >= 0."""
    w = as_matrix(w)
    g = conjugate_transpose(w) @ w
    vals = eigenvalues(g, backend=backend).values
    real = np.clip(vals.real, 0.0, None)
    return EigenSpectrum(np.sort(real).astype(np.complex128))


def rescale_to_unit_radius(spectrum: EigenSpectrum) -> EigenSpectrum:
    radius = float(np.max(np.abs(spectrum.values)))
    if radius == 0.0:
        raise ValueError("cannot rescale an all-zero spectrum")
    return EigenSpectrum(spectrum.values / radius, spectrum.source)


def modulus_density(spectrum: EigenSpectrum, k_bins: int = DEFAULT_BINS,
                    upper: Optional[float] = None) -> SpectralDensity:
    """Histogram of |lambda| on ``[0, upper)``; the top value lands in the last bin."""
    mod = np.abs(spectrum.values)
    if mod.size == 0:
        raise ValueError("empty spectrum")
    top = float(mod.max()) if upper is None else float(upper)
    if top <= 0.0:
        top = 1.0
    # widen by one ulp so the maximum modulus falls inside the half-open grid
    grid = BinGrid(k_bins, 0.0, float(np.nextafter(top, np.inf)))
    return SpectralDensity(grid, grid.histogram_density(mod))
