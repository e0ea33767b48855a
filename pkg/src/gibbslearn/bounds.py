"""Scalar envelope calculators: locality, truncation and stability bounds.

These return the structural part of each bound (constant factor 1); callers
compare data against `constant * envelope` with constants fixed empirically.
All formulas are evaluated in log space where overflow is possible.
"""

from __future__ import annotations

import math

from .kernels import KernelParams

E2 = math.e**2


def lieb_robinson_envelope(a_support: int, degree: int, t: float, ell: int) -> float:
    """min(2, |A| (2 d |t|)^ell / ell!) for the radius-ell patch error of A(t)."""
    x = 2.0 * degree * abs(t)
    if x == 0:
        return 0.0 if ell > 0 else 2.0
    log_term = math.log(a_support) + ell * math.log(x) - math.lgamma(ell + 1)
    return min(2.0, math.exp(min(log_term, 700.0)))


def lr_perturbation_envelope(
    degree: int, deltas_by_distance: list[tuple[float, int]], t: float
) -> float:
    """Evolution difference under a perturbed Hamiltonian.

    deltas_by_distance: (|h_gamma - h'_gamma|, dist(gamma, A)) per changed term.
    Bound: (1/d) sum |delta| min( (2 d t)^{dist+1} / (dist+1)!, 2 d t ).
    """
    x = 2.0 * degree * abs(t)
    total = 0.0
    for delta, dist in deltas_by_distance:
        if delta == 0:
            continue
        k = dist + 1
        log_term = k * math.log(x) - math.lgamma(k + 1) if x > 0 else -math.inf
        total += delta * min(math.exp(min(log_term, 700.0)), x)
    return total / degree


def high_frequency_envelope(p: KernelParams, degree: int) -> float:
    """Decay envelope of |Q| restricted to frequencies above omega_cut,
    per unit ||O|| ||A||: d^{4 + 16 e^2 d^4 / sigma^2} sigma^{-1/2}
    e^{-omega_cut / 4d + sigma^2 / 16 d^2}."""
    d = float(degree)
    log_val = (
        (4 + 16 * E2 * d**4 / p.sigma**2) * math.log(d)
        - 0.5 * math.log(p.sigma)
        - p.omega_cut / (4 * d)
        + p.sigma**2 / (16 * d**2)
    )
    return math.exp(min(log_val, 700.0))


def kms_comparison_envelope(beta: float, degree: int, support_size: int) -> float:
    """Factor relating the normalised Frobenius norm to the KMS norm for an
    operator on `support_size` sites: e^{80 beta |supp|} (2 d beta)^{16 d beta}."""
    x = 2.0 * degree * beta
    log_val = 80.0 * beta * support_size + 16.0 * degree * beta * math.log(x)
    return math.exp(min(log_val, 700.0))


def stability_a_envelope(
    p: KernelParams, degree: int, o_support: int, a_support: int, ell: int
) -> float:
    """Change of Q when both Hamiltonian slots are replaced by radius-ell patches."""
    d = float(degree)
    b = p.beta
    decay = math.exp(-(ell**2) / (16 * E2**2 * d**2 * b**2)) + math.exp(
        -math.pi * ell / (E2 * d * b)
    )
    return (
        math.exp(b * p.omega_cut / 2) / math.sqrt(b) * decay * (o_support + a_support)
    )


def stability_b_envelope(
    p: KernelParams,
    degree: int,
    surface_sums: list[tuple[int, int]],
    ell0: int,
    kappa: float,
) -> float:
    """Extensive-error form: kappa times the sum over shells ell >= ell0 of
    (S(ell,A) + S(ell,O)) (beta + ell/d) (gaussian + exponential decay),
    scaled by e^{beta omega_cut / 2} / sqrt(beta).

    surface_sums: (ell, S(ell, A) + S(ell, O)) for every shell with ell >= ell0.
    kappa: per-term coefficient shift outside the radius-ell0 ball.
    """
    d = float(degree)
    b = p.beta
    acc = 0.0
    for ell, s in surface_sums:
        if ell < ell0 or s == 0:
            continue
        decay = math.exp(-(ell**2) / (16 * E2**2 * d**2 * b**2)) + math.exp(
            -math.pi * ell / (2 * E2 * d * b)
        )
        acc += s * (b + ell / d) * decay
    return kappa * math.exp(b * p.omega_cut / 2) / math.sqrt(b) * acc


def stability_c_envelope(
    p: KernelParams, degree: int, volume_o: int, volume_a: int, kappa: float
) -> float:
    """Coefficient-perturbation form: kappa sqrt(beta)/d e^{beta omega_cut/2}
    (V(ell0, O) + V(ell0, A))."""
    return (
        kappa
        * math.sqrt(p.beta)
        / degree
        * math.exp(p.beta * p.omega_cut / 2)
        * (volume_o + volume_a)
    )


def time_truncation_decay(p: KernelParams, t_max: float, tprime_max: float) -> float:
    """Structural decay of the truncation error used for constant-fitting:
    (e^{beta omega_cut/2 + sigma^2 beta^2/4} / (sqrt(sigma) beta))
    (e^{-sigma^2 T'^2} + e^{-2 pi T / beta})."""
    b, s, w = p.beta, p.sigma, p.omega_cut
    pre = math.exp(b * w / 2 + (s * b) ** 2 / 4) / (math.sqrt(s) * b)
    return pre * (math.exp(-((s * tprime_max) ** 2)) + math.exp(-2 * math.pi * t_max / b))
