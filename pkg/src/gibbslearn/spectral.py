"""Exact spectral machinery: Gibbs states, Bohr decompositions, evolutions.

Everything here works on dense matrices via one eigendecomposition per
Hamiltonian.  Functions of Bohr frequencies are applied elementwise to the
matrix of eigenvalue differences, which is exact for continuous kernels
regardless of how degeneracies are grouped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels as _kernels
from .pauli import HamiltonianSpec

#: largest exponent fed to exp() before the overflow guard trips
EXP_GUARD = 700.0


def _as_dense(h, cap=None) -> np.ndarray:
    if isinstance(h, HamiltonianSpec):
        return h.to_dense(cap=cap)
    return np.asarray(h, dtype=complex)


def op_norm(x: np.ndarray) -> float:
    """Spectral norm."""
    return float(np.linalg.norm(x, 2))


class SpectralData:
    """Eigendecomposition of a Hermitian matrix with degeneracy grouping.

    grouping_tol defaults to 1e-9 * ||H||; eigenvalues closer than that are
    treated as one eigenspace when projectors or grouped frequencies are
    requested.
    """

    def __init__(self, h, grouping_tol: float | None = None):
        h = _as_dense(h)
        if not np.allclose(h, h.conj().T, atol=1e-12 * max(1.0, np.abs(h).max())):
            raise ValueError("matrix is not Hermitian")
        self.energies, self.basis = np.linalg.eigh(h)
        self.dim = h.shape[0]
        norm = float(np.abs(self.energies).max()) if self.dim else 0.0
        if grouping_tol is None:
            grouping_tol = 1e-9 * norm if norm > 0 else 1e-12
        self.grouping_tol = float(grouping_tol)
        self.groups = _cluster(self.energies, self.grouping_tol)
        self.group_energies = np.array(
            [self.energies[idx].mean() for idx in self.groups]
        )

    def to_eigenbasis(self, x: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ x @ self.basis

    def from_eigenbasis(self, x: np.ndarray) -> np.ndarray:
        return self.basis @ x @ self.basis.conj().T

    def freq_matrix(self) -> np.ndarray:
        """Bohr frequencies elementwise: F[i, j] = E_i - E_j."""
        return self.energies[:, None] - self.energies[None, :]

    def apply_freq_kernel(self, a: np.ndarray, fn) -> np.ndarray:
        """sum_nu fn(nu) A_nu, evaluated elementwise in the eigenbasis."""
        w = self.to_eigenbasis(a)
        return self.from_eigenbasis(w * fn(self.freq_matrix()))

    def projector(self, group_index: int) -> np.ndarray:
        cols = self.basis[:, self.groups[group_index]]
        return cols @ cols.conj().T


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Indices of `values` grouped into runs closer than tol (values sorted)."""
    if len(values) == 0:
        return []
    order = np.argsort(values)
    sorted_vals = values[order]
    breaks = np.where(np.diff(sorted_vals) > tol)[0]
    pieces = np.split(np.arange(len(values)), breaks + 1)
    return [np.sort(order[p]) for p in pieces]


@dataclass
class GibbsState:
    """rho = exp(-beta H) / Z with cached square roots."""

    beta: float
    spectral: SpectralData
    rho: np.ndarray
    sqrt_rho: np.ndarray
    inv_sqrt_rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.spectral.dim


def gibbs_state(h, beta: float, grouping_tol: float | None = None) -> GibbsState:
    """Gibbs state of h (HamiltonianSpec or dense Hermitian) at inverse temperature beta."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    sd = h if isinstance(h, SpectralData) else SpectralData(h, grouping_tol)
    e = sd.energies
    w = np.exp(-beta * (e - e.min()))
    z = w.sum()
    p = w / z
    u = sd.basis
    rho = (u * p) @ u.conj().T
    sqrt_rho = (u * np.sqrt(p)) @ u.conj().T
    inv_sqrt_rho = (u / np.sqrt(p)) @ u.conj().T
    return GibbsState(float(beta), sd, rho, sqrt_rho, inv_sqrt_rho)


@dataclass
class BohrDecomposition:
    """A = sum_nu A_nu with A_nu = sum_{E2 - E1 = nu} P_E2 A P_E1."""

    frequencies: np.ndarray
    components: list[np.ndarray]
    grouping_tol: float

    def reconstruct(self) -> np.ndarray:
        return sum(self.components)

    def component(self, nu: float) -> np.ndarray:
        idx = np.where(np.abs(self.frequencies - nu) <= self.grouping_tol)[0]
        if len(idx) == 0:
            raise KeyError(f"no Bohr component at frequency {nu}")
        return self.components[int(idx[0])]

    def __len__(self) -> int:
        return len(self.frequencies)


def bohr_decompose(a: np.ndarray, spectral: SpectralData) -> BohrDecomposition:
    """Group the matrix elements of a by Bohr frequency of the given Hamiltonian."""
    w = spectral.to_eigenbasis(a)
    ge = spectral.group_energies
    tol = max(2 * spectral.grouping_tol, 1e-12)
    # distinct differences of grouped energies, merged again within tol
    diffs = np.sort((ge[:, None] - ge[None, :]).ravel())
    freqs: list[float] = []
    for v in diffs:
        if not freqs or v - freqs[-1] > tol:
            freqs.append(float(v))
    fmat = spectral.freq_matrix()
    comps: list[np.ndarray] = []
    kept: list[float] = []
    for nu in freqs:
        mask = np.abs(fmat - nu) <= tol
        if not mask.any():
            continue
        comp = spectral.from_eigenbasis(np.where(mask, w, 0.0))
        if np.abs(comp).max() > 0:
            comps.append(comp)
            kept.append(nu)
    return BohrDecomposition(np.array(kept), comps, tol)


def heisenberg_evolve(a: np.ndarray, spectral: SpectralData, t: float) -> np.ndarray:
    """A(t) = e^{iHt} A e^{-iHt}."""
    return spectral.apply_freq_kernel(a, lambda nu: np.exp(1j * nu * t))


def operator_fourier_transform(
    a: np.ndarray, spectral: SpectralData, omega: float, sigma: float
) -> np.ndarray:
    """A_hat(omega) = sum_nu A_nu f_hat(omega - nu) with the Gaussian window f."""
    return spectral.apply_freq_kernel(
        a, lambda nu: _kernels.f_hat(omega - nu, sigma)
    )


def imaginary_conjugate(a: np.ndarray, spectral: SpectralData, beta: float) -> np.ndarray:
    """e^{beta H} A e^{-beta H} = sum_nu e^{beta nu} A_nu."""
    span = float(np.abs(spectral.freq_matrix()).max()) if spectral.dim else 0.0
    if abs(beta) * span > EXP_GUARD:
        raise OverflowError(
            f"|beta * nu| up to {abs(beta) * span:.3g} exceeds the exp guard {EXP_GUARD}"
        )
    return spectral.apply_freq_kernel(a, lambda nu: np.exp(beta * nu))


def kms_inner_product(x: np.ndarray, y: np.ndarray, state: GibbsState) -> complex:
    """<x, y>_rho = Tr[x^dag rho^{1/2} y rho^{1/2}]."""
    s = state.sqrt_rho
    return complex(np.trace(x.conj().T @ s @ y @ s))


def kms_norm(x: np.ndarray, state: GibbsState) -> float:
    v = kms_inner_product(x, x, state)
    return float(np.sqrt(max(v.real, 0.0)))


def tau_norm(x: np.ndarray) -> float:
    """Normalised Frobenius norm: ||x||_tau^2 = Tr[x^dag x] / dim."""
    return float(np.sqrt((np.abs(x) ** 2).sum() / x.shape[0]))
