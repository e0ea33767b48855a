import numpy as np
import pytest

from gibbslearn.geometry import GeometrySpec
from gibbslearn.pauli import HamiltonianSpec, PauliString

LETTERS = ("X", "Y", "Z")


def random_pauli(rng, sites, max_weight=2):
    weight = int(rng.integers(1, max_weight + 1))
    chosen = rng.choice(len(sites), size=min(weight, len(sites)), replace=False)
    return PauliString.from_map(
        {int(sites[i]): LETTERS[int(rng.integers(3))] for i in chosen}
    )


def random_spec(rng, n_sites, n_terms, coeff_range=1.0):
    """Random local Hamiltonian on a chain; terms have weight <= 2 and
    distinct Pauli strings so coefficients are identifiable."""
    geom = GeometrySpec(kind="chain", extents=(n_sites,))
    sites = tuple(range(n_sites))
    seen = set()
    terms = {}
    tid = 0
    guard = 0
    while len(terms) < n_terms:
        guard += 1
        if guard > 500:
            raise RuntimeError("could not draw enough distinct terms")
        ps = random_pauli(rng, sites)
        key = ps.to_text()
        if key in seen:
            continue
        seen.add(key)
        coeff = float(rng.uniform(-coeff_range, coeff_range))
        terms[tid] = (ps, coeff)
        tid += 1
    return HamiltonianSpec(terms, geom)


def dense_hamiltonian(spec):
    return spec.to_dense()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
