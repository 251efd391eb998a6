"""Line-oriented JSON ensemble datasets (format documented in docs/FORMAT.md)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .core import EigenSpectrum, Provenance
from .ensembles import EnsembleKind, EnsembleSpec, plan_chunks

FORMAT_VERSION = 1


@dataclass
class Dataset:
    spec: EnsembleSpec
    spectra: List[EigenSpectrum]
    config: Optional[dict] = None
    header: dict = field(default_factory=dict)


def dataset_filename(kind, size_n: int) -> str:
    return f"{EnsembleKind(kind).value}_N{size_n}.jsonl"


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def header_record(spec: EnsembleSpec, config: Optional[dict] = None) -> dict:
    rec = {
        "record": "header",
        "format_version": FORMAT_VERSION,
        "kind": spec.kind.value,
        "N": spec.size_n,
        "matrix_dim": spec.matrix_dim,
        "M": spec.count_m,
        "master_seed": spec.master_seed,
        "chunk_size": spec.chunk_size,
    }
    if config is not None:
        rec["config"] = config
    return rec


def write_dataset(path, spec: EnsembleSpec, spectra, config: Optional[dict] = None) -> Path:
    path = Path(path)
    if len(spectra) != spec.count_m:
        raise ValueError(f"expected {spec.count_m} spectra, got {len(spectra)}")
    chunk_of = {i: c.chunk_index for c in plan_chunks(spec) for i in c.members}
    lines = [_dumps(header_record(spec, config))]
    for idx, sp in enumerate(spectra):
        pairs = [[float(z.real), float(z.imag)] for z in sp.values]
        lines.append(_dumps({
            "record": "member",
            "member_index": idx,
            "chunk_index": chunk_of[idx],
            "eigenvalues": pairs,
        }))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_dataset(path) -> Dataset:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    head = json.loads(lines[0])
    if head.get("record") != "header":
        raise ValueError(f"{path}: first record is not a header")
    if head.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format_version {head.get('format_version')!r}")
    spec = EnsembleSpec(
        kind=EnsembleKind(head["kind"]),
        size_n=int(head["N"]),
        count_m=int(head["M"]),
        master_seed=int(head["master_seed"]),
        chunk_size=int(head["chunk_size"]),
    )
    seeds = {c.chunk_index: c.derived_seed for c in plan_chunks(spec)}
    spectra = []
    for ln in lines[1:]:
        rec = json.loads(ln)
        if rec.get("record") != "member":
            raise ValueError(f"{path}: unexpected record {rec.get('record')!r}")
        vals = np.array(rec["eigenvalues"], dtype=np.float64).reshape(-1, 2)
        src = Provenance(
            kind=spec.kind.value,
            member_index=int(rec["member_index"]),
            seed=seeds.get(int(rec["chunk_index"])),
            chunk_index=int(rec["chunk_index"]),
            size_n=spec.size_n,
        )
        spectra.append(EigenSpectrum(vals[:, 0] + 1j * vals[:, 1], src))
    if len(spectra) != spec.count_m:
        raise ValueError(f"{path}: header says M={spec.count_m}, found {len(spectra)} members")
    return Dataset(spec, spectra, head.get("config"), head)
