"""CSV/JSON writers for Omega, cascade and density exports."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .analysis import ErgodicityCascade, OmegaDistribution, SpectralDensity

OMEGA_COLUMNS = ("kind", "N", "M", "K", "bin_center", "omega_value")
CASCADE_COLUMNS = ("kind", "N_a", "N_b", "d_se")
DENSITY_COLUMNS = ("bin_lower", "bin_upper", "density")


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def _write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload, indent=1, allow_nan=False) + "\n", encoding="utf-8")
    return path


def _kind_str(kind) -> str:
    return kind.value if kind is not None else ""


def omega_rows(om: OmegaDistribution):
    kind = _kind_str(om.kind)
    for c, v in zip(om.grid.centers, om.values):
        yield (kind, om.label_n, om.count_m, om.grid.k_bins, float(c), float(v))


def write_omega(stem, omegas: Sequence[OmegaDistribution], config: Optional[dict] = None):
    stem = Path(stem)
    rows = [r for om in omegas for r in omega_rows(om)]
    csv_path = _write_csv(stem.with_suffix(".csv"), OMEGA_COLUMNS, rows)
    payload = {
        "columns": list(OMEGA_COLUMNS),
        "omega": [
            {
                "kind": _kind_str(om.kind),
                "N": om.label_n,
                "matrix_dim": om.size_n,
                "M": om.count_m,
                "K": om.grid.k_bins,
                "bin_center": [float(c) for c in om.grid.centers],
                "omega_value": [float(v) for v in om.values],
            }
            for om in omegas
        ],
    }
    if config is not None:
        payload["config"] = config
    json_path = _write_json(stem.with_suffix(".json"), payload)
    return csv_path, json_path


def write_cascade(stem, cascades: Sequence[ErgodicityCascade], config: Optional[dict] = None):
    stem = Path(stem)
    rows = [(_kind_str(c.kind), na, nb, float(d)) for c in cascades for na, nb, d in c.pairs]
    csv_path = _write_csv(stem.with_suffix(".csv"), CASCADE_COLUMNS, rows)
    payload = {
        "columns": list(CASCADE_COLUMNS),
        "cascade": [dict(zip(CASCADE_COLUMNS, r)) for r in rows],
    }
    if config is not None:
        payload["config"] = config
    json_path = _write_json(stem.with_suffix(".json"), payload)
    return csv_path, json_path


def write_density(stem, density: SpectralDensity, extra: Optional[dict] = None):
    stem = Path(stem)
    edges = density.grid.edges
    rows = [(float(lo), float(hi), float(v)) for lo, hi, v in zip(edges[:-1], edges[1:], density.values)]
    csv_path = _write_csv(stem.with_suffix(".csv"), DENSITY_COLUMNS, rows)
    payload = {"columns": list(DENSITY_COLUMNS), "density": [dict(zip(DENSITY_COLUMNS, r)) for r in rows]}
    if extra:
        payload.update(extra)
    json_path = _write_json(stem.with_suffix(".json"), payload)
    return csv_path, json_path
