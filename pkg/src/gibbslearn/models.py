"""Canonical model builders used by the CLI and the test suite."""

from __future__ import annotations

import numpy as np

from .geometry import GeometrySpec
from .pauli import HamiltonianSpec, PauliString


def chain(n: int, periodic: bool = False) -> GeometrySpec:
    return GeometrySpec(kind="chain", extents=(n,), periodic=periodic)


def lattice2d(rows: int, cols: int, periodic: bool = False) -> GeometrySpec:
    return GeometrySpec(kind="lattice2d", extents=(rows, cols), periodic=periodic)


def _edge_site_terms(geom: GeometrySpec, edge_maker, site_maker):
    """Edge terms first, then site terms, ids sequential."""
    terms = {}
    tid = 0
    for a, b in geom.edges():
        for entry in edge_maker(a, b):
            terms[tid] = entry
            tid += 1
    for s in geom.sites:
        for entry in site_maker(s):
            terms[tid] = entry
            tid += 1
    return terms


def tfim(geom: GeometrySpec, zz: float = 1.0, x: float = 0.7) -> HamiltonianSpec:
    """Ising ZZ couplings plus a transverse X field."""
    terms = _edge_site_terms(
        geom,
        lambda a, b: [(PauliString.from_map({a: "Z", b: "Z"}), zz)],
        lambda s: [(PauliString.from_map({s: "X"}), x)],
    )
    return HamiltonianSpec(terms, geom)


def heisenberg(geom: GeometrySpec, coupling: float = 0.45, field: float = 0.3) -> HamiltonianSpec:
    """XX + YY + ZZ on every edge plus a Z field on every site."""
    terms = _edge_site_terms(
        geom,
        lambda a, b: [
            (PauliString.from_map({a: L, b: L}), coupling) for L in ("X", "Y", "Z")
        ],
        lambda s: [(PauliString.from_map({s: "Z"}), field)],
    )
    return HamiltonianSpec(terms, geom)


def random_model(geom: GeometrySpec, seed: int, coeff_range: float = 1.0) -> HamiltonianSpec:
    """One random two-site Pauli per edge, one random single-site Pauli per
    site, coefficients uniform in [-coeff_range, coeff_range]."""
    rng = np.random.default_rng(seed)
    letters = "XYZ"

    def edge_maker(a, b):
        la, lb = rng.choice(list(letters), size=2)
        c = float(rng.uniform(-coeff_range, coeff_range))
        return [(PauliString.from_map({a: str(la), b: str(lb)}), c)]

    def site_maker(s):
        l = str(rng.choice(list(letters)))
        c = float(rng.uniform(-coeff_range, coeff_range))
        return [(PauliString.from_map({s: l}), c)]

    terms = _edge_site_terms(geom, edge_maker, site_maker)
    return HamiltonianSpec(terms, geom)


def with_random_coefficients(
    spec: HamiltonianSpec, seed: int, low: float = -1.0, high: float = 1.0
) -> HamiltonianSpec:
    """Same terms, fresh uniform coefficients."""
    rng = np.random.default_rng(seed)
    new = {t: float(rng.uniform(low, high)) for t in spec.term_ids}
    return spec.with_coefficients(new)


def build_model(name: str, geom: GeometrySpec, seed: int = 0) -> HamiltonianSpec:
    if name == "tfim":
        return tfim(geom)
    if name == "heisenberg":
        return heisenberg(geom)
    if name == "random":
        return random_model(geom, seed)
    raise ValueError(f"unknown model {name!r}")


def parse_geometry(text: str, periodic: bool = False) -> GeometrySpec:
    """chain:N or lattice2d:RxC."""
    kind, _, rest = text.partition(":")
    if kind == "chain":
        return chain(int(rest), periodic)
    if kind == "lattice2d":
        r, _, c = rest.partition("x")
        return lattice2d(int(r), int(c), periodic)
    raise ValueError(f"unknown geometry {text!r}; use chain:N or lattice2d:RxC")
