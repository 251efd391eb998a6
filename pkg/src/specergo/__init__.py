"""Circular random-matrix ensembles and spectral-ergodicity distances."""
from .analysis import (
    BinGrid,
    ErgodicityCascade,
    MeanDensity,
    OmegaDistribution,
    SpectralDensity,
    cascade,
    d_se,
    gram_spectrum,
    kl,
    mean_density,
    omega,
    omega_from_spectra,
    phase_density,
    rescale_to_unit_radius,
)
from .core import EigenSpectrum, Provenance, conjugate_transpose, eigenvalues, matmul
from .ensembles import (
    EnsembleKind,
    EnsembleSpec,
    generate_ensemble,
    make_symplectic_z,
    plan_chunks,
    sample_coe,
    sample_cse,
    sample_cue,
    sample_hermitian,
)
from .errors import ConvergenceError, DegenerateInputError

__version__ = "0.1.0"
