"""The identifiability functional Q and its exact companions.

Q(O, G, A, K) is a linear functional of the hidden Gibbs state rho built from
two probe operators (O, A) and two Hamiltonians: G generates the outer
Heisenberg evolution, K the inner one.  With ground truth in the K slot it
vanishes identically; its size elsewhere lower-bounds how far K is from the
truth near the probes.

Frequency form (exact):

  Q = sum_{mu in B(G), nu in B(K)} g_hat_beta(mu + nu) *
      [ w_plus(nu) Tr[(O^dag)_mu A_nu rho] - w_minus(nu) Tr[(O^dag)_mu rho A_nu] ]

Time form (what an experiment discretises):

  Q = (1/2pi) iint g_beta(t) Tr[ O^dag_G(t) ( h_plus(t') A_K(t + t') rho
                                   - h_minus(t') rho A_K(t + t') ) ] dt' dt

A uniform product grid collapses exactly onto the frequency algebra with the
continuum kernels replaced by their grid transforms, so the quadrature path
never materialises the grid; the literal double sum is kept as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from . import bounds as _bounds
from . import geometry as _geometry
from . import kernels as _k
from .pauli import HamiltonianSpec
from .spectral import GibbsState, SpectralData, op_norm

#: largest dimension for the distinct-eigenbasis (4-index) evaluation path
GENERAL_PATH_DIM_CAP = 40


@dataclass
class QInputs:
    """Probe pair, Hamiltonian slots, hidden state and kernel parameters.

    g_ham / k_ham may be HamiltonianSpec, dense Hermitian arrays, or None
    (the zero Hamiltonian).  Supports are only needed for stability bounds.
    """

    o_op: np.ndarray
    g_ham: object
    a_op: np.ndarray
    k_ham: object
    truth: GibbsState
    params: _k.KernelParams
    o_support: frozenset[int] | None = None
    a_support: frozenset[int] | None = None


@dataclass(frozen=True)
class QValue:
    value: complex
    path: str
    est_error: float


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _dense_or_none(h, dim: int):
    if h is None:
        return None
    if isinstance(h, HamiltonianSpec):
        if len(h) == 0:
            return None
        return h.to_dense()
    arr = np.asarray(h, dtype=complex)
    if arr.shape != (dim, dim):
        raise ValueError("Hamiltonian dimension does not match the probes")
    if not arr.any():
        return None
    return arr


class _KernelSet:
    """Exact kernels, or their grid transforms for a fixed quadrature grid."""

    def __init__(self, p: _k.KernelParams, grid: _k.QuadratureGrid | None = None):
        self.p = p
        self.grid = grid

    def g(self, x):
        if self.grid is None:
            return _k.g_hat_beta(x, self.p.beta)
        return _k.grid_transform_g(self.grid, self.p, x) / _k.SQRT_2PI

    def w(self, nu, sign: int):
        if self.grid is None:
            if sign > 0:
                return _k.bohr_weight_plus(nu, self.p)
            return _k.bohr_weight_minus(nu, self.p)
        return _k.grid_transform_h(self.grid, self.p, nu, sign) / _k.SQRT_2PI


class SharedBasisEngine:
    """Q evaluation when the two Hamiltonian slots share one eigenbasis.

    Covers the two probe layouts the learner uses: G identical to K, and
    G = 0.  One eigendecomposition of K serves every probe pair, and each
    Q value costs two dim^3 products.
    """

    def __init__(self, k_dense, rho: np.ndarray, p: _k.KernelParams, kset: _KernelSet | None = None):
        dim = rho.shape[0]
        if k_dense is None:
            self.energies = np.zeros(dim)
            self.basis = np.eye(dim, dtype=complex)
        else:
            sd = SpectralData(k_dense)
            self.energies = sd.energies
            self.basis = sd.basis
        self.p = p
        self.kset = kset or _KernelSet(p)
        self.rho_eig = self.basis.conj().T @ rho @ self.basis
        f = np.subtract.outer(self.energies, self.energies)
        self.freq = f
        self.ghat = self.kset.g(f)
        self.wplus = self.kset.w(f, +1)
        self.wminus = self.kset.w(f, -1)
        self._cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def freq_span(self) -> float:
        return float(self.energies.max() - self.energies.min())

    def _eig(self, x: np.ndarray) -> np.ndarray:
        # the cache must keep x alive: a freed array's id can be reused by
        # the next allocation of the same size, which would alias the entry
        key = id(x)
        hit = self._cache.get(key)
        if hit is None:
            got = self.basis.conj().T @ x @ self.basis
            self._cache[key] = (x, got)
            return got
        return hit[1]

    def q_value(self, o_op: np.ndarray, a_op: np.ndarray, probe: str = "self") -> complex:
        m = self._eig(o_op).conj().T
        a = self._eig(a_op)
        r = self.rho_eig
        if probe == "self":
            q1 = (self.ghat * (m @ (a * self.wplus)) * r.T).sum()
            q2 = (self.ghat * ((a * self.wminus) @ m) * r.T).sum()
        elif probe == "zero":
            q1 = np.trace(m @ (a * self.wplus * self.ghat) @ r)
            q2 = np.trace(m @ r @ (a * self.wminus * self.ghat))
        else:
            raise ValueError(f"unknown probe layout {probe!r}")
        return complex(q1 - q2)

    def q_operator(self, o_op: np.ndarray, a_op: np.ndarray, probe: str = "self") -> np.ndarray:
        m = self._eig(o_op).conj().T
        a = self._eig(a_op)
        if probe == "self":
            op = self.ghat * (m @ (a * self.wplus)) - self.ghat * ((a * self.wminus) @ m)
        elif probe == "zero":
            op = m @ (a * self.wplus * self.ghat) - (a * self.wminus * self.ghat) @ m
        else:
            raise ValueError(f"unknown probe layout {probe!r}")
        return self.basis @ op @ self.basis.conj().T


def _q_general(qin: QInputs, kset: _KernelSet, want_operator: bool):
    """Distinct eigenbases: the full Bohr-pair contraction (small dims only)."""
    g_dense = _dense_or_none(qin.g_ham, qin.truth.dim)
    k_dense = _dense_or_none(qin.k_ham, qin.truth.dim)
    dim = qin.truth.dim
    if dim > GENERAL_PATH_DIM_CAP:
        raise ValueError(
            f"distinct-basis Q evaluation is capped at dim {GENERAL_PATH_DIM_CAP}"
        )
    sg = SpectralData(g_dense) if g_dense is not None else None
    sk = SpectralData(k_dense) if k_dense is not None else None
    ug = sg.basis if sg else np.eye(dim, dtype=complex)
    eg = sg.energies if sg else np.zeros(dim)
    uk = sk.basis if sk else np.eye(dim, dtype=complex)
    ek = sk.energies if sk else np.zeros(dim)

    m = ug.conj().T @ qin.o_op.conj().T @ ug
    a = uk.conj().T @ qin.a_op @ uk
    v = ug.conj().T @ uk
    rho = qin.truth.rho
    p1 = uk.conj().T @ rho @ ug
    v2 = ug.conj().T @ rho @ uk
    p2 = v.conj().T

    mu = np.subtract.outer(eg, eg)
    nu = np.subtract.outer(ek, ek)
    ker = kset.g(mu[:, :, None, None] + nu[None, None, :, :])
    aw_p = a * kset.w(nu, +1)
    aw_m = a * kset.w(nu, -1)

    if not want_operator:
        t1 = (
            ker
            * m[:, :, None, None]
            * v[None, :, :, None]
            * aw_p[None, None, :, :]
            * p1.T[:, None, None, :]
        ).sum()
        t2 = (
            ker
            * m[:, :, None, None]
            * v2[None, :, :, None]
            * aw_m[None, None, :, :]
            * p2.T[:, None, None, :]
        ).sum()
        return complex(t1 - t2)

    s1 = np.einsum("ijkl,ij,jk,kl->il", ker, m, v, aw_p)
    s2 = np.einsum("ijkl,kl,li,ij->kj", ker, aw_m, v.conj().T, m)
    return ug @ s1 @ uk.conj().T - uk @ s2 @ ug.conj().T


def _hamiltonians_share_basis(qin: QInputs) -> str | None:
    """Return "self", "zero_g", "zero_k" when a shared-basis layout applies."""
    dim = qin.truth.dim
    g_dense = _dense_or_none(qin.g_ham, dim)
    k_dense = _dense_or_none(qin.k_ham, dim)
    if g_dense is None and k_dense is None:
        return "zero_g"
    if g_dense is None:
        return "zero_g"
    if k_dense is None:
        return "zero_k"
    if qin.g_ham is qin.k_ham or np.array_equal(g_dense, k_dense):
        return "self"
    return None


def _q_dispatch(qin: QInputs, kset: _KernelSet, want_operator: bool):
    layout = _hamiltonians_share_basis(qin)
    if layout is None:
        return _q_general(qin, kset, want_operator)
    dim = qin.truth.dim
    k_dense = _dense_or_none(qin.k_ham, dim)
    g_dense = _dense_or_none(qin.g_ham, dim)
    if layout == "zero_k":
        # K = 0: single Bohr frequency nu = 0 for the inner slot
        eng = SharedBasisEngine(g_dense, qin.truth.rho, qin.params, kset)
        m = eng.basis.conj().T @ qin.o_op.conj().T @ eng.basis
        a = eng.basis.conj().T @ qin.a_op @ eng.basis
        r = eng.rho_eig
        w0p = complex(np.asarray(kset.w(np.array(0.0), +1)).reshape(()))
        w0m = complex(np.asarray(kset.w(np.array(0.0), -1)).reshape(()))
        mg = m * eng.ghat
        if want_operator:
            op = w0p * (mg @ a) - w0m * (a @ mg)
            return eng.basis @ op @ eng.basis.conj().T
        q1 = w0p * np.trace(mg @ a @ r)
        q2 = w0m * np.trace(mg @ r @ a)
        return complex(q1 - q2)
    eng = SharedBasisEngine(k_dense, qin.truth.rho, qin.params, kset)
    probe = "self" if layout == "self" else "zero"
    if want_operator:
        return eng.q_operator(qin.o_op, qin.a_op, probe)
    return eng.q_value(qin.o_op, qin.a_op, probe)


def _freq_spans(qin: QInputs) -> tuple[float, float]:
    dim = qin.truth.dim
    spans = []
    for h in (qin.g_ham, qin.k_ham):
        d = _dense_or_none(h, dim)
        if d is None:
            spans.append(0.0)
        else:
            e = np.linalg.eigvalsh(d)
            spans.append(float(e.max() - e.min()))
    return spans[0], spans[1]


def q_frequency_exact(qin: QInputs) -> QValue:
    """Q by the exact Bohr-frequency formula (error only from rounding)."""
    val = _q_dispatch(qin, _KernelSet(qin.params), want_operator=False)
    return QValue(val, "frequency_exact", 0.0)


def q_time_quadrature(
    qin: QInputs, grid: _k.QuadratureGrid | None = None, tol: float = 1e-6
) -> QValue:
    """Q by the truncated, discretised double time integral.

    est_error combines the exact truncation tails with an aliasing estimate
    for the step; it bounds |value - Q_exact| for the returned grid.
    """
    norms = op_norm(qin.o_op) * op_norm(qin.a_op)
    span_g, span_k = _freq_spans(qin)
    if grid is None:
        grid = _k.choose_truncation(
            qin.params, max(norms, 1e-300), tol, freq_span_g=span_g, freq_span_k=span_k
        )
    val = _q_dispatch(qin, _KernelSet(qin.params, grid), want_operator=False)
    est = norms * (
        _k.truncation_envelope(qin.params, grid.t_max, grid.tprime_max)
        + _k.alias_estimate(qin.params, grid.step, span_g, span_k)
    )
    return QValue(val, "time_quadrature", float(est))


def q_time_direct(qin: QInputs, grid: _k.QuadratureGrid) -> QValue:
    """Literal double quadrature over the grid (oracle; small systems only)."""
    from .spectral import heisenberg_evolve

    dim = qin.truth.dim
    g_dense = _dense_or_none(qin.g_ham, dim)
    k_dense = _dense_or_none(qin.k_ham, dim)
    zero = np.zeros((dim, dim), dtype=complex)
    sg = SpectralData(g_dense if g_dense is not None else zero)
    sk = SpectralData(k_dense if k_dense is not None else zero)
    rho = qin.truth.rho
    odag = qin.o_op.conj().T
    p = qin.params
    t_nodes, t_w = grid.t_axis()
    tp_nodes, tp_w = grid.tprime_axis()
    hp = _k.h_plus(tp_nodes, p)
    hm = _k.h_minus(tp_nodes, p)
    gb = _k.g_beta(t_nodes, p.beta)
    acc = 0.0 + 0.0j
    for t, wt, gval in zip(t_nodes, t_w, gb):
        ot = heisenberg_evolve(odag, sg, t)
        inner = np.zeros_like(rho)
        for tp, wp_, hpv, hmv in zip(tp_nodes, tp_w, hp, hm):
            a_evol = heisenberg_evolve(qin.a_op, sk, t + tp)
            inner += wp_ * (hpv * a_evol @ rho - hmv * rho @ a_evol)
        acc += wt * gval * np.trace(ot @ inner)
    return QValue(complex(acc) / (2 * math.pi), "time_direct", math.inf)


def assemble_q_operator(qin: QInputs, grid: _k.QuadratureGrid | None = None) -> np.ndarray:
    """The operator whose expectation under rho is Q.

    With grid=None the exact kernels are used; with a grid, the collapsed
    trapezoid transforms, which is exactly the operator a shot experiment
    on the discretised integral estimates.
    """
    kset = _KernelSet(qin.params, grid)
    return _q_dispatch(qin, kset, want_operator=True)


def truth_hamiltonian(state: GibbsState) -> np.ndarray:
    sd = state.spectral
    return (sd.basis * sd.energies) @ sd.basis.conj().T


def identifiability_lhs(qin: QInputs) -> complex:
    """(beta/2) <O, [A, H - K]>_rho with H the hidden Hamiltonian."""
    from .spectral import kms_inner_product

    dim = qin.truth.dim
    h = truth_hamiltonian(qin.truth)
    k = _dense_or_none(qin.k_ham, dim)
    diff = h - (k if k is not None else 0.0)
    val = kms_inner_product(qin.o_op, commutator(qin.a_op, diff), qin.truth)
    return qin.truth.beta / 2 * val


def commutator_difference_bohr(
    a: np.ndarray, s1: SpectralData, s2: SpectralData
) -> np.ndarray:
    """[A, H2] - [A, H1] = - sum_{n1, n2} (nu2 - nu1) (A_{nu1})_{nu2}.

    The double Bohr sum is separable in the frequencies and reduces to two
    basis sandwiches; no explicit decomposition is materialised.
    """
    v = s1.basis.conj().T @ s2.basis
    w1 = s1.to_eigenbasis(a)
    f2 = s2.freq_matrix()
    e1 = s1.freq_matrix()
    inner = f2 * (v.conj().T @ w1 @ v) - v.conj().T @ (w1 * e1) @ v
    return -s2.from_eigenbasis(inner)


def sinh_conjugation_difference(
    a: np.ndarray, s1: SpectralData, s2: SpectralData
) -> np.ndarray:
    """sum_{n1, n2} 2 sinh(nu2 - nu1) (A_{nu1})_{nu2}, equal to
    e^{H2} e^{-H1} A e^{H1} e^{-H2}  -  e^{-H2} e^{H1} A e^{-H1} e^{H2}."""
    from .spectral import bohr_decompose

    f2 = s2.freq_matrix()
    acc = np.zeros_like(a, dtype=complex)
    dec = bohr_decompose(a, s1)
    for nu1, comp in zip(dec.frequencies, dec.components):
        w = s2.to_eigenbasis(comp)
        acc += s2.from_eigenbasis(w * 2 * np.sinh(f2 - nu1))
    return acc


def high_frequency_residual(qin: QInputs, method: str = "quadrature") -> complex:
    """(beta/2) integral over |w'| >= omega_cut of <O, [A_hat_K(w'), H - K]>_rho.

    Default integrates the scalar spectral density by adaptive quadrature;
    method="closed" uses the exact Gaussian tail weights instead.
    """
    from .spectral import kms_inner_product, operator_fourier_transform

    dim = qin.truth.dim
    p = qin.params
    k_dense = _dense_or_none(qin.k_ham, dim)
    sk = SpectralData(k_dense if k_dense is not None else np.zeros((dim, dim)))
    h = truth_hamiltonian(qin.truth)
    diff = h - (k_dense if k_dense is not None else 0.0)

    if method == "closed":
        s = p.sigma
        pref = (s * _k.SQRT_2PI) ** (-0.5) * s * math.sqrt(math.pi)

        def tail_weight(nu):
            return pref * (
                erfc((p.omega_cut - nu) / (2 * s)) + erfc((p.omega_cut + nu) / (2 * s))
            )

        r_op = sk.apply_freq_kernel(qin.a_op, tail_weight)
        val = kms_inner_product(qin.o_op, commutator(r_op, diff), qin.truth)
        return qin.truth.beta / 2 * complex(val)

    def density(w):
        a_hat = operator_fourier_transform(qin.a_op, sk, w, p.sigma)
        return kms_inner_product(qin.o_op, commutator(a_hat, diff), qin.truth)

    span = float(np.abs(sk.freq_matrix()).max()) if dim else 0.0
    hi = max(p.omega_cut, span) + 10 * p.sigma
    total = 0.0 + 0.0j
    for lo, up in ((p.omega_cut, hi), (-hi, -p.omega_cut)):
        re = quad(lambda w: density(w).real, lo, up, limit=300, epsabs=1e-13)[0]
        im = quad(lambda w: density(w).imag, lo, up, limit=300, epsabs=1e-13)[0]
        total += re + 1j * im
    return qin.truth.beta / 2 * complex(total)


def stability_bounds(
    qin: QInputs,
    mode: str,
    ell: int | None = None,
    ell0: int = 2,
    kappa: float | None = None,
) -> float:
    """Structural envelope for how much Q can move under the given change.

    mode "A_truncate": both Hamiltonian slots replaced by radius-ell patches.
    mode "B_extensive": coefficients beyond radius ell0 each moved by kappa,
    resolved shell by shell.
    mode "C_ball": coefficients inside the radius-ell0 ball moved by kappa.
    Constants are deliberately structural (factor 1); calibration lives with
    the consumers.
    """
    if not isinstance(qin.k_ham, HamiltonianSpec):
        raise ValueError("stability bounds need a HamiltonianSpec in the K slot")
    if qin.o_support is None or qin.a_support is None:
        raise ValueError("stability bounds need probe supports")
    graph = qin.k_ham.graph
    d = max(graph.degree_bound, 1)
    p = qin.params
    if mode == "A_truncate":
        if ell is None:
            raise ValueError("mode A needs ell")
        return _bounds.stability_a_envelope(
            p, d, len(qin.o_support), len(qin.a_support), ell
        )
    if mode == "B_extensive":
        if kappa is None:
            raise ValueError("mode B needs kappa")
        diam = graph.diameter()
        surface_sums = []
        for l in range(ell0, diam + 2):
            s = _geometry.surface_count(graph, l, qin.a_support) + _geometry.surface_count(
                graph, l, qin.o_support
            )
            surface_sums.append((l, s))
        return _bounds.stability_b_envelope(p, d, surface_sums, ell0, kappa)
    if mode == "C_ball":
        if kappa is None:
            raise ValueError("mode C needs kappa")
        vo = _geometry.volume_count(graph, ell0, qin.o_support)
        va = _geometry.volume_count(graph, ell0, qin.a_support)
        return _bounds.stability_c_envelope(p, d, vo, va, kappa)
    raise ValueError(f"unknown stability mode {mode!r}")
