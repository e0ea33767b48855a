"""Pauli-string algebra with exact phase tracking.

Phases live in the group {1, i, -1, -i}, stored as the exponent k of i^k, so
products and commutators are exact.  Dense matrices are only materialised on
demand and only below a qubit cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: default ceiling for dense materialisation (2^12-dimensional matrices)
DENSE_SITE_CAP = 12

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (k, c) with a.b = i^k c for single-site letters
_MUL = {
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
    ("X", "X"): (0, "I"), ("Y", "Y"): (0, "I"), ("Z", "Z"): (0, "I"),
}


class DenseCapExceeded(RuntimeError):
    """Raised when a dense matrix above the qubit cap is requested."""


@dataclass(frozen=True)
class PauliString:
    """Non-identity Pauli letters by site, with an i^k phase out front."""

    letters: tuple[tuple[int, str], ...]
    phase_power: int = 0

    def __post_init__(self):
        sites = [s for s, _ in self.letters]
        if sites != sorted(set(sites)):
            raise ValueError("letters must be sorted by site, one per site")
        for _, l in self.letters:
            if l not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli letter {l!r}")
        object.__setattr__(self, "phase_power", self.phase_power % 4)

    @classmethod
    def from_map(cls, letters: dict[int, str], phase_power: int = 0) -> "PauliString":
        items = tuple(sorted((s, l) for s, l in letters.items() if l != "I"))
        return cls(items, phase_power)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.letters)

    @property
    def weight(self) -> int:
        return len(self.letters)

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_power

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def letter_at(self, site: int) -> str:
        for s, l in self.letters:
            if s == site:
                return l
        return "I"

    def dagger(self) -> "PauliString":
        return PauliString(self.letters, -self.phase_power)

    def canonical(self) -> "PauliString":
        return PauliString(self.letters, 0)

    def mul(self, other: "PauliString") -> "PauliString":
        """Exact product self @ other."""
        k = self.phase_power + other.phase_power
        out: dict[int, str] = dict(self.letters)
        for s, l in other.letters:
            a = out.pop(s, "I")
            if a == "I":
                out[s] = l
                continue
            dk, c = _MUL[(a, l)]
            k += dk
            if c != "I":
                out[s] = c
        return PauliString.from_map(out, k)

    def commutes_with(self, other: "PauliString") -> bool:
        clashes = 0
        mine = dict(self.letters)
        for s, l in other.letters:
            a = mine.get(s, "I")
            if a != "I" and a != l:
                clashes += 1
        return clashes % 2 == 0

    def to_dense(self, sites: list[int], cap: int | None = None) -> np.ndarray:
        """Dense matrix on the ordered qubit register `sites`."""
        cap = DENSE_SITE_CAP if cap is None else cap
        if len(sites) > cap:
            raise DenseCapExceeded(
                f"{len(sites)} qubits exceeds the dense cap of {cap}"
            )
        missing = self.support - set(sites)
        if missing:
            raise ValueError(f"sites {sorted(missing)} not in the register")
        out = np.array([[self.phase]], dtype=complex)
        for s in sites:
            out = np.kron(out, _SINGLE[self.letter_at(s)])
        return out

    def to_text(self) -> str:
        """Text form like "X1 Z3" (sites 1-indexed); phase must be +1."""
        if self.phase_power != 0:
            raise ValueError("only phase +1 strings serialise to text")
        return " ".join(f"{l}{s + 1}" for s, l in self.letters)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        letters: dict[int, str] = {}
        for tok in text.split():
            if len(tok) < 2 or tok[0] not in "XYZ" or not tok[1:].isdigit():
                raise ValueError(f"malformed Pauli token {tok!r}")
            site = int(tok[1:]) - 1
            if site < 0:
                raise ValueError(f"sites are 1-indexed, got token {tok!r}")
            if site in letters:
                raise ValueError(f"site {site + 1} repeated in {text!r}")
            letters[site] = tok[0]
        return cls.from_map(letters)

    def __str__(self) -> str:
        body = " ".join(f"{l}{s + 1}" for s, l in self.letters) or "1"
        pre = {0: "", 1: "i ", 2: "- ", 3: "-i "}[self.phase_power]
        return pre + body


def pauli_commutator(a: PauliString, b: PauliString):
    """[a, b] as (scale, canonical string), or None when they commute.

    Two Pauli strings either commute or anticommute, so the commutator is
    the single string 2ab; the scale carries the 2 and all phases.
    """
    if a.commutes_with(b):
        return None
    ab = a.mul(b)
    return 2.0 * ab.phase, ab.canonical()


class HamiltonianSpec:
    """A local Hamiltonian: distinct non-identity Pauli terms with real weights.

    Terms are id -> (phase-free PauliString, coefficient).  The interaction
    graph is built on construction and term ids survive restriction.
    """

    def __init__(self, terms: dict[int, tuple[PauliString, float]], geometry):
        from . import geometry as _g

        self.geometry = geometry
        register = set(geometry.sites)
        seen: set[tuple] = set()
        clean: dict[int, tuple[PauliString, float]] = {}
        for tid, (ps, coeff) in terms.items():
            if ps.is_identity:
                raise ValueError(f"term {tid} is the identity")
            if ps.phase_power != 0:
                raise ValueError(f"term {tid} carries a phase; fold it into the coefficient")
            if not ps.support <= register:
                raise ValueError(f"term {tid} acts outside the geometry")
            if ps.letters in seen:
                raise ValueError(f"duplicate Pauli string in term {tid}")
            seen.add(ps.letters)
            clean[int(tid)] = (ps, float(coeff))
        self.terms = clean
        self.graph = _g.build_graph({t: ps.support for t, (ps, _) in clean.items()})

    @property
    def sites(self) -> list[int]:
        return sorted(self.geometry.sites)

    @property
    def n_sites(self) -> int:
        return len(self.geometry.sites)

    @property
    def term_ids(self) -> list[int]:
        return sorted(self.terms)

    @property
    def locality(self) -> int:
        return self.graph.locality_bound

    @property
    def degree(self) -> int:
        return self.graph.degree_bound

    def coefficients(self) -> dict[int, float]:
        return {t: c for t, (_, c) in self.terms.items()}

    def coefficient_vector(self) -> np.ndarray:
        return np.array([self.terms[t][1] for t in self.term_ids])

    def validate_unit_coefficients(self, tol: float = 1e-12):
        for t, (_, c) in self.terms.items():
            if abs(c) > 1 + tol:
                raise ValueError(f"coefficient of term {t} is {c}, outside [-1, 1]")

    def with_coefficients(self, coeffs: dict[int, float]) -> "HamiltonianSpec":
        new = {
            t: (ps, coeffs.get(t, c)) for t, (ps, c) in self.terms.items()
        }
        return HamiltonianSpec(new, self.geometry)

    def restricted(self, term_ids) -> "HamiltonianSpec":
        keep = set(term_ids)
        new = {t: v for t, v in self.terms.items() if t in keep}
        return HamiltonianSpec(new, self.geometry)

    def to_dense(self, cap: int | None = None) -> np.ndarray:
        sites = self.sites
        cap = DENSE_SITE_CAP if cap is None else cap
        if len(sites) > cap:
            raise DenseCapExceeded(
                f"{len(sites)} qubits exceeds the dense cap of {cap}"
            )
        dim = 2 ** len(sites)
        out = np.zeros((dim, dim), dtype=complex)
        for ps, coeff in self.terms.values():
            out += coeff * ps.to_dense(sites, cap=cap)
        return out

    def term_dense(self, tid: int, cap: int | None = None) -> np.ndarray:
        ps, _ = self.terms[tid]
        return ps.to_dense(self.sites, cap=cap)

    def __len__(self) -> int:
        return len(self.terms)
