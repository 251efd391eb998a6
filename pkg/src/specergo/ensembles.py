"""Circular ensemble samplers with chunked, replayable seeding.

Every member is built from a Gaussian Hermitian seed matrix ``H``:
``U = diag(exp(i*gamma)) @ V`` with ``V`` the orthonormal eigenvectors of
``H`` and ``gamma`` uniform on [0, 2pi). COE members are ``U.T @ U`` and
CSE members ``(Z @ U.T @ Z) @ U`` for a ``2N x 2N`` draw of ``U``.

Members are grouped into chunks; each chunk owns a PCG64 stream seeded by a
SplitMix64 mix of ``master_seed ^ chunk_index``, consumed sequentially in
member order. Output therefore depends on ``chunk_size`` but never on how
many worker processes evaluate the chunks.
"""
from __future__ import annotations

import enum
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .core import EigenSpectrum, Provenance, eigenvalues
from .errors import ConvergenceError

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
DEGENERATE_GAP = 1e-12


class EnsembleKind(str, enum.Enum):
    CUE = "CUE"
    COE = "COE"
    CSE = "CSE"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str) and value.upper() in cls.__members__:
            return cls[value.upper()]
        return None

    @property
    def dim_factor(self) -> int:
        return 2 if self is EnsembleKind.CSE else 1

    def matrix_dim(self, size_n: int) -> int:
        return self.dim_factor * size_n


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    size_n: int
    count_m: int
    master_seed: int = 0
    chunk_size: int = 8

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if self.size_n < 1:
            raise ValueError("size_n must be >= 1")
        if self.count_m < 1:
            raise ValueError("count_m must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")

    @property
    def matrix_dim(self) -> int:
        return self.kind.matrix_dim(self.size_n)


@dataclass(frozen=True)
class Chunk:
    chunk_index: int
    start: int
    stop: int
    derived_seed: int

    @property
    def members(self) -> range:
        return range(self.start, self.stop)


@dataclass(frozen=True)
class ChunkPlan:
    chunks: tuple

    def __iter__(self):
        return iter(self.chunks)

    def __len__(self):
        return len(self.chunks)


def splitmix64(x: int) -> int:
    """SplitMix64 output function applied to ``x`` (increment included)."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, chunk_index: int) -> int:
    return splitmix64((master_seed ^ chunk_index) & MASK64)


def chunk_stream(derived_seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derived_seed))


def plan_chunks(spec: EnsembleSpec) -> ChunkPlan:
    chunks = []
    for ci, start in enumerate(range(0, spec.count_m, spec.chunk_size)):
        stop = min(start + spec.chunk_size, spec.count_m)
        chunks.append(Chunk(ci, start, stop, derive_seed(spec.master_seed, ci)))
    return ChunkPlan(tuple(chunks))


# -- samplers ---------------------------------------------------------------

def _check_n(n):
    if int(n) < 1:
        raise ValueError(f"matrix size must be >= 1, got {n}")
    return int(n)


def sample_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """H_ij = (a_ij + i b_ij + a_ji - i b_ji) / 2 with a, b iid standard normal."""
    n = _check_n(n)
    a = rng.standard_normal((n, n))
    b = rng.standard_normal((n, n))
    return 0.5 * (a + a.T) + 0.5j * (b - b.T)


def _orthonormal_eigvecs(h):
    w, v = np.linalg.eigh(h)
    scale = max(float(np.max(np.abs(w))), 1.0)
    gaps = np.diff(w) <= DEGENERATE_GAP * scale
    if np.any(gaps):
        # re-orthonormalise each run of (numerically) equal eigenvalues
        i = 0
        n = len(w)
        while i < n - 1:
            if not gaps[i]:
                i += 1
                continue
            j = i
            while j < n - 1 and gaps[j]:
                j += 1
            q, _ = np.linalg.qr(v[:, i:j + 1])
            v[:, i:j + 1] = q
            i = j + 1
    return v


def sample_cue(n: int, rng: np.random.Generator) -> np.ndarray:
    n = _check_n(n)
    v = _orthonormal_eigvecs(sample_hermitian(n, rng))
    gamma = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.exp(1j * gamma)[:, None] * v


def sample_coe(n: int, rng: np.random.Generator) -> np.ndarray:
    u = sample_cue(n, rng)
    return u.T @ u


def make_symplectic_z(n: int) -> np.ndarray:
    """``2n x 2n`` block diagonal of ``[[0, 1], [-1, 0]]``."""
    n = _check_n(n)
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _z_sandwich(x):
    """``Z @ x @ Z`` via signed row/column swaps (Z is a signed permutation)."""
    y = np.empty_like(x)
    y[0::2, :] = x[1::2, :]
    y[1::2, :] = -x[0::2, :]
    out = np.empty_like(x)
    out[:, 0::2] = -y[:, 1::2]
    out[:, 1::2] = y[:, 0::2]
    return out


def sample_cse(n: int, rng: np.random.Generator) -> np.ndarray:
    """``(Z U^T Z) U`` with ``U`` drawn at dimension ``2n``."""
    n = _check_n(n)
    u = sample_cue(2 * n, rng)
    return _z_sandwich(u.T) @ u


SAMPLERS = {
    EnsembleKind.CUE: sample_cue,
    EnsembleKind.COE: sample_coe,
    EnsembleKind.CSE: sample_cse,
}


def sample(kind, n: int, rng: np.random.Generator) -> np.ndarray:
    return SAMPLERS[EnsembleKind(kind)](n, rng)


# -- generation -------------------------------------------------------------

def iter_chunk_matrices(spec: EnsembleSpec, chunk: Chunk):
    """Yield ``(member_index, matrix)`` for one chunk from its own stream."""
    rng = chunk_stream(chunk.derived_seed)
    for idx in chunk.members:
        yield idx, sample(spec.kind, spec.size_n, rng)


def _run_chunk(spec: EnsembleSpec, chunk: Chunk, backend: Optional[str]) -> List[EigenSpectrum]:
    out = []
    for idx, mat in iter_chunk_matrices(spec, chunk):
        src = Provenance(
            kind=spec.kind.value,
            member_index=idx,
            seed=chunk.derived_seed,
            chunk_index=chunk.chunk_index,
            size_n=spec.size_n,
        )
        out.append(eigenvalues(mat, source=src, backend=backend))
    return out


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit value wins; otherwise ``SPECERGO_WORKERS``; otherwise 1."""
    if workers is None:
        env = os.environ.get("SPECERGO_WORKERS")
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def generate_ensemble(spec: EnsembleSpec, workers: Optional[int] = 1,
                      backend: Optional[str] = None) -> List[EigenSpectrum]:
    """Eigen-spectra for every member of ``spec``, ordered by member index.

    ``workers > 1`` fans chunks out over a process pool; the result is
    bit-identical to the single-worker run.
    """
    workers = resolve_workers(workers)
    plan = plan_chunks(spec)
    if workers == 1 or len(plan) == 1:
        results = [_run_chunk(spec, c, backend) for c in plan]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(plan))) as pool:
            futures = [pool.submit(_run_chunk, spec, c, backend) for c in plan]
            results = [f.result() for f in futures]
    spectra = [s for chunk in results for s in chunk]
    log.debug("generated %d %s members at N=%d", len(spectra), spec.kind.value, spec.size_n)
    return spectra


__all__ = [
    "ConvergenceError",
    "EnsembleKind",
    "EnsembleSpec",
    "Chunk",
    "ChunkPlan",
    "splitmix64",
    "derive_seed",
    "chunk_stream",
    "plan_chunks",
    "sample_hermitian",
    "sample_cue",
    "sample_coe",
    "make_symplectic_z",
    "sample_cse",
    "sample",
    "generate_ensemble",
    "resolve_workers",
]
