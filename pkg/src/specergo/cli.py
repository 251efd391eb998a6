"""``specergo`` command line: generate, analyze, eigenplot, gram.

Settings come from built-in defaults, then an optional JSON file given with
``--config``, then flags (flags win). ``SPECERGO_WORKERS`` sets the worker
count when ``--workers`` is absent.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from . import analysis
from .core import principal_phase
from .dataset import dataset_filename, read_dataset, write_dataset
from .ensembles import EnsembleKind, EnsembleSpec, generate_ensemble, resolve_workers
from .errors import ConvergenceError, DegenerateInputError
from .export import write_cascade, write_density, write_omega

log = logging.getLogger("specergo")

DEFAULT_SIZES = (64, 128, 256, 512, 768, 1024)

# excluded from file headers: they change where/how fast, never what
_RUNTIME_FIELDS = ("workers", "output_dir")


@dataclass(frozen=True)
class RunConfig:
    kinds: Tuple[str, ...] = ("CUE", "COE", "CSE")
    sizes: Tuple[int, ...] = DEFAULT_SIZES
    count_m: int = 40
    k_bins: int = analysis.DEFAULT_BINS
    epsilon: float = analysis.DEFAULT_EPSILON
    master_seed: int = 0
    chunk_size: int = 8
    workers: Optional[int] = None
    output_dir: str = "."

    def __post_init__(self):
        kinds = tuple(EnsembleKind(str(k).upper()).value for k in self.kinds)
        if not kinds or len(set(kinds)) != len(kinds):
            raise ValueError("kinds must be a non-empty set of CUE/COE/CSE")
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or sizes[0] < 1 or any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be positive and strictly ascending")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "sizes", sizes)
        for name in ("count_m", "k_bins", "chunk_size"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if not float(self.epsilon) > 0:
            raise ValueError("epsilon must be positive")
        if self.master_seed < 0 or self.master_seed >= 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers is not None and self.workers < 1:
            raise ValueError("workers must be positive")

    def header(self) -> dict:
        d = asdict(self)
        for k in _RUNTIME_FIELDS:
            d.pop(k)
        d["kinds"] = list(self.kinds)
        d["sizes"] = list(self.sizes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        for k in ("kinds", "sizes"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)

    @property
    def grid(self) -> analysis.BinGrid:
        return analysis.BinGrid(self.k_bins)

    def spec(self, kind, size) -> EnsembleSpec:
        return EnsembleSpec(EnsembleKind(kind), size, self.count_m, self.master_seed, self.chunk_size)


# -- argument handling ------------------------------------------------------

def _csv_list(conv):
    def parse(text):
        try:
            return tuple(conv(x.strip()) for x in text.split(",") if x.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    return parse


_FLAG_TO_FIELD = {
    "kinds": "kinds",
    "sizes": "sizes",
    "ensemble_size": "count_m",
    "bins": "k_bins",
    "epsilon": "epsilon",
    "seed": "master_seed",
    "chunk_size": "chunk_size",
    "workers": "workers",
    "out": "output_dir",
}


def _add_run_flags(p):
    p.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    p.add_argument("--kinds", type=_csv_list(str.upper), help="comma list of CUE,COE,CSE")
    p.add_argument("--sizes", type=_csv_list(int), help="comma list of ascending sizes N")
    p.add_argument("--ensemble-size", type=int, help="members per ensemble (M)")
    p.add_argument("--bins", type=int, help="number of phase bins (K)")
    p.add_argument("--epsilon", type=float, help="floor applied to Omega before KL")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--chunk-size", type=int, help="members per seeded chunk")
    p.add_argument("--workers", type=int, help="worker processes (env SPECERGO_WORKERS)")
    p.add_argument("--out", help="output directory")


def config_from_args(args) -> RunConfig:
    merged = {}
    if getattr(args, "config", None):
        merged.update(json.loads(Path(args.config).read_text()))
    for flag, name in _FLAG_TO_FIELD.items():
        val = getattr(args, flag, None)
        if val is not None:
            merged[name] = val
    cfg = RunConfig.from_dict(merged)
    return replace(cfg, workers=resolve_workers(cfg.workers))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specergo",
        description="Circular ensemble spectra and spectral-ergodicity distances",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write one eigenvalue dataset per (kind, size)")
    _add_run_flags(p)

    p = sub.add_parser("analyze", parents=[common], help="Omega and D_se cascade exports from datasets")
    _add_run_flags(p)
    p.add_argument("--data", help="dataset directory (default: --out)")

    p = sub.add_parser("eigenplot", parents=[common], help="(re, im) scatter data of one member")
    p.add_argument("dataset", type=Path)
    p.add_argument("--member", type=int, default=0)
    p.add_argument("--out", type=Path, help="CSV destination (default: stdout)")

    p = sub.add_parser("gram", parents=[common], help="spectrum and modulus density of W^T W")
    p.add_argument("weights", type=Path, help="CSV of matrix rows")
    p.add_argument("--bins", type=int, default=analysis.DEFAULT_BINS)
    p.add_argument("--rescale", action="store_true", help="divide by the spectral radius first")
    p.add_argument("--out", type=Path, default=Path("."))
    return parser


# -- commands ---------------------------------------------------------------

def cmd_generate(cfg: RunConfig) -> list:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = cfg.header()
    written = []
    for kind in cfg.kinds:
        for size in cfg.sizes:
            spec = cfg.spec(kind, size)
            spectra = generate_ensemble(spec, cfg.workers)
            path = write_dataset(out / dataset_filename(kind, size), spec, spectra, header)
            log.info("wrote %s", path)
            written.append(path)
    return written


def cmd_analyze(cfg: RunConfig, dataset_dir=None) -> list:
    data = Path(dataset_dir or cfg.output_dir)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = cfg.grid
    header = cfg.header()
    written = []
    cascades = []
    for kind in cfg.kinds:
        omegas = []
        for size in cfg.sizes:
            path = data / dataset_filename(kind, size)
            if not path.exists():
                raise FileNotFoundError(f"missing dataset {path}")
            ds = read_dataset(path)
            if ds.spec.kind.value != kind:
                raise ValueError(f"{path}: holds {ds.spec.kind.value}, expected {kind}")
            if ds.spec.count_m != cfg.count_m:
                raise ValueError(f"{path}: M={ds.spec.count_m}, config asks for {cfg.count_m}")
            if ds.spec.size_n != size:
                log.warning("%s: header N=%d, listed as N=%d", path, ds.spec.size_n, size)
            cfg_k = (ds.config or {}).get("k_bins")
            if cfg_k is not None and cfg_k != cfg.k_bins:
                log.info("%s was generated with K=%s; analysing with K=%d", path, cfg_k, cfg.k_bins)
            omegas.append(analysis.omega_from_spectra(ds.spectra, grid, kind, size))
        written += write_omega(out / f"omega_{kind}", omegas, header)
        if len(omegas) >= 2:
            cascades.append(analysis.cascade_from_omegas(omegas, cfg.epsilon))
    written += write_cascade(out / "cascade", cascades, header)
    for c in cascades:
        log.info("%s D_se: %s", c.kind.value, ", ".join(f"{a}->{b}: {d:.4g}" for a, b, d in c.pairs))
    return written


def cmd_eigenplot(dataset_file, member: int = 0, out=None) -> np.ndarray:
    ds = read_dataset(dataset_file)
    if not 0 <= member < len(ds.spectra):
        raise IndexError(f"member {member} out of range 0..{len(ds.spectra) - 1}")
    vals = ds.spectra[member].values
    fh = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("re", "im"))
        writer.writerows((float(z.real), float(z.imag)) for z in vals)
    finally:
        if out:
            fh.close()
    return vals


def read_weights(path) -> np.ndarray:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or all(not c.strip() for c in row):
                continue
            rows.append([float(c) for c in row])
    if not rows:
        raise ValueError(f"{path}: no matrix rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: ragged rows")
    return np.array(rows, dtype=np.float64)


def cmd_gram(weights_file, k_bins: int = analysis.DEFAULT_BINS, rescale: bool = False, out=".") -> list:
    w = read_weights(weights_file)
    spec = analysis.gram_spectrum(w)
    if rescale:
        spec = analysis.rescale_to_unit_radius(spec)
    dens = analysis.modulus_density(spec, k_bins)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    extra = {
        "shape": list(w.shape),
        "rescaled": rescale,
        "eigenvalues": [float(z.real) for z in spec.values],
        "phases": [float(p) for p in principal_phase(spec.values)],
    }
    return list(write_density(out / "gram_density", dens, extra))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "generate":
            paths = cmd_generate(config_from_args(args))
        elif args.command == "analyze":
            paths = cmd_analyze(config_from_args(args), args.data)
        elif args.command == "eigenplot":
            cmd_eigenplot(args.dataset, args.member, args.out)
            paths = [args.out] if args.out else []
        else:
            paths = cmd_gram(args.weights, args.bins, args.rescale, args.out)
    except ConvergenceError as exc:
        print(f"specergo: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, IndexError, DegenerateInputError) as exc:
        print(f"specergo: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
