"""Self-check suites behind `gibbslearn verify`.

Each check compares a measured quantity against an independently computed
bound or reference and returns a CheckResult.  Suites run at 2-4 qubits with
seeded instances so the outcomes are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.linalg import expm

from . import bounds as _b
from . import kernels as _k
from . import models
from .geometry import truncate_to_ball
from .identify import (
    QInputs,
    assemble_q_operator,
    high_frequency_residual,
    identifiability_lhs,
    q_frequency_exact,
    q_time_direct,
    q_time_quadrature,
)
from .pauli import PauliString
from .spectral import (
    SpectralData,
    bohr_decompose,
    gibbs_state,
    heisenberg_evolve,
    kms_inner_product,
    op_norm,
    operator_fourier_transform,
    tau_norm,
)

SUITES = ("kernels", "oft", "identifiability", "kms", "lieb_robinson")


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        out = (
            f"{flag} {self.suite}/{self.name}: measured={self.measured:.3e} "
            f"bound={self.bound:.3e}"
        )
        if self.detail:
            out += f" ({self.detail})"
        return out


def _result(suite, name, measured, bound, detail=""):
    return CheckResult(suite, name, measured <= bound, measured, bound, detail)


def _random_dense_hermitian(rng, dim, norm=1.0):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = m + m.conj().T
    return norm * m / op_norm(m)


def _quad_complex(fn, a, b, **kw):
    re = integrate.quad(lambda t: fn(t).real, a, b, **kw)[0]
    im = integrate.quad(lambda t: fn(t).imag, a, b, **kw)[0]
    return re + 1j * im


# ---------------------------------------------------------------- kernels

def check_kernels(seed: int = 0) -> list[CheckResult]:
    out = []
    p = _k.KernelParams(beta=1.3, sigma=0.8, omega_cut=6.0)

    got = _k.f_hat(0.0, 1.0)
    out.append(
        _result(
            "kernels",
            "f_hat_zero_value",
            abs(got - (2 * math.pi) ** (-0.25)),
            1e-12,
        )
    )

    err = 0.0
    for w in (-3.0, -0.5, 0.0, 1.2, 4.0):
        quad = _quad_complex(
            lambda t: _k.f_weight(t, p.sigma) * np.exp(1j * w * t) / _k.SQRT_2PI,
            -30.0,
            30.0,
            epsabs=1e-13,
        )
        err = max(err, abs(quad - _k.f_hat(w, p.sigma)))
    out.append(_result("kernels", "f_fourier_pair", err, 1e-9))

    err = 0.0
    for nu in (-4.0, -1.0, -1e-6, 0.0, 0.3, 2.5):
        quad = _quad_complex(
            lambda t: _k.g_kernel(t) * np.exp(1j * nu * t) / _k.SQRT_2PI,
            -60.0,
            60.0,
            epsabs=1e-13,
            limit=400,
        )
        err = max(err, abs(quad - _k.g_hat(nu)))
    out.append(_result("kernels", "g_fourier_pair", err, 1e-8))
    out.append(
        _result("kernels", "g_hat_zero_is_minus_half", abs(_k.g_hat(0.0) + 0.5), 1e-14)
    )

    total = integrate.quad(lambda t: abs(_k.g_beta(t, p.beta)), -80, 80, limit=400)[0]
    out.append(
        _result(
            "kernels", "g_beta_l1_mass", abs(total - _k.g_beta_total(p.beta)), 1e-9
        )
    )
    t_cut = 1.7
    tail_quad = 2 * integrate.quad(
        lambda t: abs(_k.g_beta(t, p.beta)), t_cut, 120, limit=400
    )[0]
    out.append(
        _result(
            "kernels",
            "g_beta_tail_closed_form",
            abs(tail_quad - _k.g_beta_tail(t_cut, p.beta)),
            1e-10,
        )
    )

    # h_plus is the inverse transform of sqrt(2 pi) w_plus
    err = 0.0
    hi = p.omega_cut + 12 * p.sigma
    for t in (-1.4, -0.2, 0.0, 0.9, 2.1):
        quad = _quad_complex(
            lambda nu: _k.bohr_weight_plus(nu, p) * np.exp(-1j * nu * t) / _k.SQRT_2PI,
            -hi,
            hi,
            epsabs=1e-12,
            limit=600,
        )
        err = max(err, abs(quad - _k.h_plus(t, p)))
    out.append(_result("kernels", "h_plus_inverse_transform", err, 1e-8))

    peak = _k.h_peak_envelope(p)
    worst = 0.0
    for t in np.linspace(-4, 4, 161):
        gauss = math.exp(-(p.sigma**2) * t * t)
        worst = max(
            worst,
            abs(_k.h_plus(t, p)) / (peak * gauss),
            abs(_k.h_minus(t, p)) / (peak * gauss),
        )
    out.append(_result("kernels", "h_envelope_holds", worst, 1.0 + 1e-9))

    grid = _k.choose_truncation(p, 4.0, 1e-6, freq_span_g=8.0, freq_span_k=8.0)
    probe = np.linspace(-7.5, 7.5, 41)
    approx = _k.grid_transform_g(grid, p, probe) / _k.SQRT_2PI
    exact = _k.g_hat_beta(probe, p.beta)
    out.append(
        _result(
            "kernels",
            "grid_matches_g_hat",
            float(np.max(np.abs(approx - exact))),
            1e-6,
        )
    )
    return out


# ---------------------------------------------------------------- oft

def check_oft(seed: int = 0) -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(seed)

    # one-qubit anchor: H = Z splits X into raising/lowering parts
    sd = SpectralData(np.diag([1.0, -1.0]).astype(complex))
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    dec = bohr_decompose(x, sd)
    freq_err = float(np.max(np.abs(np.asarray(dec.frequencies) - [-2.0, 2.0])))
    comp_err = max(
        float(np.max(np.abs(dec.component(2.0) - np.array([[0, 1], [0, 0]])))),
        float(np.max(np.abs(dec.component(-2.0) - np.array([[0, 0], [1, 0]])))),
    )
    out.append(_result("oft", "one_qubit_ladder_split", freq_err + comp_err, 1e-12))

    h = _random_dense_hermitian(rng, 8, norm=2.0)
    a = _random_dense_hermitian(rng, 8)
    sd = SpectralData(h)
    dec = bohr_decompose(a, sd)
    recon = dec.reconstruct()
    out.append(
        _result("oft", "bohr_reconstruction", float(np.max(np.abs(recon - a))), 1e-12)
    )

    sigma = 0.9
    # integrating the transform over frequency returns (integral of f_hat) * A
    span = 2 * op_norm(h) + 14 * sigma
    ws = np.linspace(-span, span, 4001)
    acc = np.zeros_like(a)
    for w in ws:
        acc = acc + operator_fourier_transform(a, sd, w, sigma)
    acc *= ws[1] - ws[0]
    fhat_mass = 2 * sigma * math.sqrt(math.pi) / math.sqrt(sigma * _k.SQRT_2PI)
    out.append(
        _result(
            "oft",
            "frequency_integral_mass",
            float(np.max(np.abs(acc - fhat_mass * a))),
            1e-6,
        )
    )

    # imaginary-time conjugation shifts frequency by 2 sigma^2 beta
    beta = 0.6
    w0 = 1.1
    lhs = (
        expm(beta * h)
        @ operator_fourier_transform(a, sd, w0, sigma)
        @ expm(-beta * h)
    )
    rhs = math.exp(beta * w0 + sigma**2 * beta**2) * operator_fourier_transform(
        a, sd, w0 + 2 * sigma**2 * beta, sigma
    )
    out.append(
        _result(
            "oft",
            "imaginary_time_shift",
            float(np.max(np.abs(lhs - rhs))) / max(1e-30, float(np.max(np.abs(rhs)))),
            1e-9,
        )
    )

    t = 0.7
    evolved = heisenberg_evolve(a, sd, t)
    oracle = expm(1j * t * h) @ a @ expm(-1j * t * h)
    out.append(
        _result(
            "oft",
            "heisenberg_evolution_matches_expm",
            float(np.max(np.abs(evolved - oracle))),
            1e-10,
        )
    )

    # Gaussian norm decay with imaginary-time weighting, several betas
    worst = 0.0
    nus = sd.freq_matrix()[np.abs(a) > 1e-14]
    a_tau = tau_norm(a)
    for beta in (-1.3, -0.4, 0.0, 0.7, 1.5):
        wb = expm(beta * h / 2)
        wbi = expm(-beta * h / 2)
        for w in np.linspace(-12, 12, 25):
            m = wb @ operator_fourier_transform(a, sd, w, sigma) @ wbi
            bound = a_tau * float(
                np.max(np.exp(beta * nus / 2) * _k.f_hat(w - nus, sigma))
            )
            worst = max(worst, tau_norm(m) / max(bound, 1e-300))
    out.append(_result("oft", "weighted_norm_decay", worst, 1.0 + 1e-9))
    return out


# ------------------------------------------------------- identifiability

def _random_instance(rng, n_qubits, beta=1.0, omega=7.0):
    dim = 2**n_qubits
    h = _random_dense_hermitian(rng, dim, norm=1.5)
    kk = _random_dense_hermitian(rng, dim, norm=1.5)
    a = _random_dense_hermitian(rng, dim)
    o = _random_dense_hermitian(rng, dim)
    truth = gibbs_state(h, beta)
    p = _k.KernelParams(beta=beta, sigma=1.0 / beta, omega_cut=omega)
    return QInputs(o_op=o, g_ham=kk, a_op=a, k_ham=kk, truth=truth, params=p), h


def check_identifiability(seed: int = 0) -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(seed)

    # single-qubit anchor evaluated three independent ways
    hz = np.diag([1.0, -1.0]).astype(complex)
    kz = 0.5 * hz
    ax = np.array([[0, 1], [1, 0]], dtype=complex)
    ox = ax @ hz - hz @ ax
    truth = gibbs_state(hz, 1.0)
    p = _k.KernelParams(beta=1.0, sigma=1.0, omega_cut=8.0)
    qin = QInputs(o_op=ox, g_ham=kz, a_op=ax, k_ham=kz, truth=truth, params=p)
    qf = q_frequency_exact(qin)
    grid = _k.choose_truncation(p, 4.0, 1e-8, freq_span_g=3.0, freq_span_k=3.0)
    qt = q_time_quadrature(qin, grid=grid)
    qd = q_time_direct(qin, grid)
    err = max(abs(qt.value - qf.value), abs(qd.value - qt.value))
    out.append(
        _result(
            "identifiability",
            "one_qubit_paths_agree",
            err,
            max(qt.est_error, 1e-7),
            f"Q={qf.value:.6e}",
        )
    )

    # ground truth makes Q vanish identically
    worst = 0.0
    for n in (2, 3):
        m, h = _random_instance(rng, n)
        qin = QInputs(
            o_op=m.o_op, g_ham=h, a_op=m.a_op, k_ham=h, truth=m.truth, params=m.params
        )
        worst = max(worst, abs(q_frequency_exact(qin).value))
    out.append(_result("identifiability", "vanishes_at_truth", worst, 1e-11))

    # Q + high-frequency remainder closes the weighted commutator identity;
    # the probe evolution runs under the hidden Hamiltonian here
    worst = 0.0
    for trial in range(4):
        m, h = _random_instance(rng, 2 + trial % 2)
        qin = QInputs(
            o_op=m.o_op, g_ham=h, a_op=m.a_op, k_ham=m.k_ham,
            truth=m.truth, params=m.params,
        )
        lhs = identifiability_lhs(qin) * _k.reconstruction_constant(qin.params.sigma)
        rhs = q_frequency_exact(qin).value + high_frequency_residual(qin)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-12))
    out.append(_result("identifiability", "identity_closure", worst, 1e-7))

    # quadrature path lands within its own error estimate
    worst_ratio = 0.0
    for trial in range(3):
        qin, _ = _random_instance(rng, 2)
        qf = q_frequency_exact(qin)
        qt = q_time_quadrature(qin, tol=1e-6)
        worst_ratio = max(
            worst_ratio, abs(qt.value - qf.value) / max(qt.est_error, 1e-300)
        )
    out.append(_result("identifiability", "quadrature_within_estimate", worst_ratio, 1.0))

    # the assembled observable reproduces Q under the truth state
    qin, _ = _random_instance(rng, 2)
    q_op = assemble_q_operator(qin)
    qf = q_frequency_exact(qin)
    tr = np.trace(q_op @ qin.truth.rho)
    out.append(
        _result(
            "identifiability",
            "observable_traces_to_q",
            abs(tr - qf.value),
            1e-10,
        )
    )
    return out


# ---------------------------------------------------------------- kms

def check_kms(seed: int = 0) -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(seed)

    spec = models.tfim(models.chain(4))
    beta = 0.9
    state = gibbs_state(spec, beta)
    d = spec.graph.degree_bound

    x = _random_dense_hermitian(rng, 16)
    y = _random_dense_hermitian(rng, 16)
    sym = abs(
        kms_inner_product(x, y, state) - np.conj(kms_inner_product(y, x, state))
    )
    out.append(_result("kms", "conjugate_symmetry", sym, 1e-12))

    xx = kms_inner_product(x, x, state)
    out.append(_result("kms", "positivity", -xx.real, 1e-12, f"im={xx.imag:.1e}"))

    cs = abs(kms_inner_product(x, y, state)) ** 2
    den = kms_inner_product(x, x, state).real * kms_inner_product(y, y, state).real
    out.append(_result("kms", "cauchy_schwarz", cs / den, 1.0 + 1e-12))

    # two-sided comparison with the normalized trace norm
    env = _b.kms_comparison_envelope(beta, d, support_size=4)
    worst = 0.0
    for _ in range(6):
        z = _random_dense_hermitian(rng, 16)
        ratio = kms_inner_product(z, z, state).real / tau_norm(z) ** 2
        worst = max(worst, ratio, 1.0 / ratio)
    out.append(
        _result("kms", "tau_norm_comparison", worst, env, f"ratio bound {env:.2e}")
    )

    # at beta = 0 the KMS product reduces to the normalized HS product
    state0 = gibbs_state(spec, 0.0)
    diff = abs(kms_inner_product(x, y, state0) - np.trace(x.conj().T @ y) / 16)
    out.append(_result("kms", "infinite_temperature_limit", diff, 1e-12))
    return out


# ------------------------------------------------------ lieb_robinson

def check_lieb_robinson(seed: int = 0) -> list[CheckResult]:
    out = []
    spec = models.tfim(models.chain(6))
    d = spec.graph.degree_bound
    site = 2
    a_ps = PauliString.from_map({site: "X"})
    a = a_ps.to_dense(spec.sites)
    h = spec.to_dense()
    sd = SpectralData(h)

    worst = 0.0
    const = 4.0
    for ell in range(2, 8):
        patch = truncate_to_ball(spec, {site}, ell, inclusive=False)
        hp = patch.to_dense()
        sdp = SpectralData(hp)
        for t in (0.25, 0.5, 1.0):
            diff = op_norm(heisenberg_evolve(a, sd, t) - heisenberg_evolve(a, sdp, t))
            env = _b.lieb_robinson_envelope(1, d, t, ell)
            worst = max(worst, diff / max(const * env, 1e-300))
    out.append(
        _result(
            "lieb_robinson",
            "patch_evolution_error",
            worst,
            1.0,
            f"constant {const}",
        )
    )

    # perturbing far terms moves local evolution by the propagated envelope
    spec2 = dict(spec.terms)
    far_id = max(spec.term_ids)
    ps, c = spec.terms[far_id]
    delta = 0.08
    spec2[far_id] = (ps, c + delta)
    h2 = models.HamiltonianSpec(spec2, spec.geometry).to_dense()
    sd2 = SpectralData(h2)
    dist = spec.graph.distance({site}, spec.terms[far_id][0].support)
    worst = 0.0
    for t in (0.3, 0.8):
        diff = op_norm(heisenberg_evolve(a, sd, t) - heisenberg_evolve(a, sd2, t))
        env = _b.lr_perturbation_envelope(d, [(delta, dist)], t)
        worst = max(worst, diff / max(const * env, 1e-300))
    out.append(_result("lieb_robinson", "perturbation_response", worst, 1.0))
    return out


_CHECKS = {
    "kernels": check_kernels,
    "oft": check_oft,
    "identifiability": check_identifiability,
    "kms": check_kms,
    "lieb_robinson": check_lieb_robinson,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "all":
        results = []
        for key in SUITES:
            results.extend(_CHECKS[key](seed))
        return results
    if name not in _CHECKS:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return _CHECKS[name](seed)
