"""JSON schema for model specs and learn reports.

Files are versioned with schema_version and written with sorted keys so the
output is byte-stable for a fixed input (timestamps excluded).
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .geometry import GeometrySpec
from .learner import LearnReport
from .pauli import HamiltonianSpec, PauliString

SCHEMA_VERSION = 1


def geometry_to_dict(geom: GeometrySpec) -> dict:
    d = {"kind": geom.kind, "periodic": geom.periodic}
    if geom.kind == "custom":
        d["sites"] = list(geom.custom_sites)
    else:
        d["extents"] = list(geom.extents)
    return d


def geometry_from_dict(d: dict) -> GeometrySpec:
    kind = d["kind"]
    if kind == "custom":
        return GeometrySpec(
            kind="custom",
            extents=(),
            periodic=bool(d.get("periodic", False)),
            custom_sites=tuple(d["sites"]),
        )
    return GeometrySpec(
        kind=kind,
        extents=tuple(d["extents"]),
        periodic=bool(d.get("periodic", False)),
    )


def spec_to_dict(spec: HamiltonianSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "geometry": geometry_to_dict(spec.geometry),
        "terms": [
            {"id": t, "pauli": ps.to_text(), "coeff": c}
            for t, (ps, c) in sorted(spec.terms.items())
        ],
    }


def spec_from_dict(d: dict) -> HamiltonianSpec:
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    geom = geometry_from_dict(d["geometry"])
    terms = {}
    for row in d["terms"]:
        tid = int(row["id"])
        if tid in terms:
            raise ValueError(f"duplicate term id {tid}")
        terms[tid] = (PauliString.from_text(row["pauli"]), float(row["coeff"]))
    return HamiltonianSpec(terms, geom)


def save_spec(spec: HamiltonianSpec, path: str | Path) -> None:
    Path(path).write_text(dumps(spec_to_dict(spec)))


def load_spec(path: str | Path) -> HamiltonianSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def report_to_dict(report: LearnReport, config: dict | None = None) -> dict:
    d = dataclasses.asdict(report)
    d["learned"] = {str(k): v for k, v in report.learned.items()}
    if report.truth_error is not None:
        d["truth_error"] = {str(k): v for k, v in report.truth_error.items()}
    d["schema_version"] = SCHEMA_VERSION
    if config is not None:
        d["config"] = config
    return d


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_coerce) + "\n"


def _coerce(x):
    try:
        import numpy as np

        if isinstance(x, np.generic):
            return x.item()
    except ImportError:
        pass
    raise TypeError(f"not JSON serializable: {type(x)}")
