"""Scalar kernels of the thermal commutator functional, plus quadrature planning.

Conventions (unitary Fourier transform with kernel e^{-i w t}/sqrt(2pi)):

  f(t)      = sqrt(sigma sqrt(2/pi)) exp(-sigma^2 t^2),  L2-normalised window
  f_hat(w)  = (sigma sqrt(2pi))^{-1/2} exp(-w^2 / 4 sigma^2)
  g(t)      = -pi^{3/2} / (2 sqrt2 (1 + cosh(pi t))),  g_hat(nu) = -nu / (2 sinh nu)
  g_beta(t) = (2/beta) g(2t/beta),  so g_hat_beta(nu) = g_hat(beta nu / 2)

  h_plus(t)  = f(t) e^{sigma^2 beta^2/4} e^{i sigma^2 beta t}
               * 2 sinh(W(beta/2 + i t)) / (beta/2 + i t),   W = omega_cut
  h_minus(t) = conj(h_plus(t)) for real t

  w_plus(nu)  = C e^{-beta nu/2} win(nu),  w_minus(nu) = C e^{+beta nu/2} win(nu)
  win(nu)     = [erf((W - nu)/2 sigma) + erf((W + nu)/2 sigma)] / 2
  C           = sqrt(2 sigma sqrt(2pi))

so that integral e^{i nu t} h_plus(t) dt = sqrt(2pi) w_plus(nu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc, erfcinv, erfcx

EXP_GUARD = 700.0

SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class KernelParams:
    """Inverse temperature, Gaussian width and frequency cutoff of the kernels."""

    beta: float
    sigma: float | None = None
    omega_cut: float = 10.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.sigma is None:
            object.__setattr__(self, "sigma", 1.0 / self.beta)
        if self.sigma <= 0 or self.omega_cut <= 0:
            raise ValueError("sigma and omega_cut must be positive")
        if self.beta * self.omega_cut / 2 > EXP_GUARD:
            raise OverflowError("beta * omega_cut too large for double precision")


def f_weight(t, sigma: float):
    t = np.asarray(t, dtype=float)
    return math.sqrt(sigma * math.sqrt(2 / math.pi)) * np.exp(-(sigma * t) ** 2)


def f_hat(omega, sigma: float):
    omega = np.asarray(omega, dtype=float)
    return (sigma * SQRT_2PI) ** (-0.5) * np.exp(-(omega**2) / (4 * sigma**2))


def g_kernel(t):
    """g(t) = -pi^{3/2} / (2 sqrt2 (1 + cosh(pi t))), overflow-safe."""
    t = np.asarray(t, dtype=float)
    # 1 + cosh(x) = 2 cosh^2(x/2); sech in terms of decaying exponentials
    x = np.abs(np.pi * t / 2)
    sech = 2 * np.exp(-x) / (1 + np.exp(-2 * x))
    return -(np.pi**1.5) / (4 * math.sqrt(2)) * sech**2


def g_hat(nu):
    """g_hat(nu) = -nu / (2 sinh nu); even, g_hat(0) = -1/2."""
    nu = np.asarray(nu, dtype=float)
    out = np.empty_like(nu)
    small = np.abs(nu) < 1e-4
    ns = nu[small]
    out[small] = -0.5 * (1 - ns**2 / 6 + 7 * ns**4 / 360)
    nb = np.abs(nu[~small])
    # nu/sinh(nu) = 2 nu e^{-nu} / (1 - e^{-2 nu}) for nu > 0, even in nu
    ratio = 2 * nb * np.exp(-nb) / (1 - np.exp(-2 * nb))
    out[~small] = -0.5 * ratio
    return out if out.ndim else float(out)


def g_beta(t, beta: float):
    t = np.asarray(t, dtype=float)
    return (2.0 / beta) * g_kernel(2 * t / beta)


def g_hat_beta(nu, beta: float):
    return g_hat(np.asarray(nu, dtype=float) * beta / 2)


def h_plus(t, p: KernelParams):
    t = np.asarray(t, dtype=float)
    z = p.beta / 2 + 1j * t
    core = 2 * np.sinh(p.omega_cut * z) / z
    return (
        f_weight(t, p.sigma)
        * math.exp((p.sigma * p.beta) ** 2 / 4)
        * np.exp(1j * p.sigma**2 * p.beta * t)
        * core
    )


def h_minus(t, p: KernelParams):
    t = np.asarray(t, dtype=float)
    z = p.beta / 2 - 1j * t
    core = 2 * np.sinh(p.omega_cut * z) / z
    return (
        f_weight(t, p.sigma)
        * math.exp((p.sigma * p.beta) ** 2 / 4)
        * np.exp(-1j * p.sigma**2 * p.beta * t)
        * core
    )


def _window(nu, p: KernelParams):
    s = 2 * p.sigma
    return 0.5 * (erf((p.omega_cut - nu) / s) + erf((p.omega_cut + nu) / s))


def reconstruction_constant(sigma: float) -> float:
    """C with A = (1/C) integral A_hat(w) dw; C = sqrt(2 sigma sqrt(2pi))."""
    return math.sqrt(2 * sigma * SQRT_2PI)


def bohr_weight_plus(nu, p: KernelParams):
    nu = np.asarray(nu, dtype=float)
    ex = -p.beta * nu / 2
    if np.any(np.abs(ex) > EXP_GUARD):
        raise OverflowError("beta * nu exceeds the exp guard")
    return reconstruction_constant(p.sigma) * np.exp(ex) * _window(nu, p)


def bohr_weight_minus(nu, p: KernelParams):
    nu = np.asarray(nu, dtype=float)
    ex = p.beta * nu / 2
    if np.any(np.abs(ex) > EXP_GUARD):
        raise OverflowError("beta * nu exceeds the exp guard")
    return reconstruction_constant(p.sigma) * np.exp(ex) * _window(nu, p)


# ---------------------------------------------------------------------------
# exact tail integrals and envelopes used for error accounting


def g_beta_total(beta: float) -> float:
    """integral |g_beta| dt = sqrt(pi/2), independent of beta."""
    return math.sqrt(math.pi / 2)


def g_beta_tail(t_max: float, beta: float) -> float:
    """integral_{|t| > T} |g_beta| dt = sqrt(pi/2) (1 - tanh(pi T / beta)), exact."""
    return math.sqrt(math.pi / 2) * (1 - math.tanh(math.pi * t_max / beta))


def h_peak_envelope(p: KernelParams) -> float:
    """K with |h_plus(t)|, |h_minus(t)| <= K exp(-sigma^2 t^2)."""
    return (
        math.sqrt(p.sigma * math.sqrt(2 / math.pi))
        * math.exp((p.sigma * p.beta) ** 2 / 4)
        * (4 / p.beta)
        * math.sinh(p.beta * p.omega_cut / 2)
    )


def h_total(p: KernelParams) -> float:
    """Upper bound on integral (|h_plus| + |h_minus|) dt."""
    return 2 * h_peak_envelope(p) * math.sqrt(math.pi) / p.sigma


def h_tail(t_max: float, p: KernelParams) -> float:
    """Upper bound on the |t| > T tail of integral (|h_plus| + |h_minus|)."""
    return 2 * h_peak_envelope(p) * (math.sqrt(math.pi) / p.sigma) * float(
        erfc(p.sigma * t_max)
    )


def truncation_envelope(p: KernelParams, t_max: float, tprime_max: float) -> float:
    """Bound on the truncation error of the double time integral, per unit
    ||O|| ||A||: (1/2pi) [ tail_g * total_h + total_g * tail_h ]."""
    return (
        g_beta_tail(t_max, p.beta) * h_total(p)
        + g_beta_total(p.beta) * h_tail(tprime_max, p)
    ) / (2 * math.pi)


def _g_hat_beta_mag(x: float, beta: float) -> float:
    y = beta * abs(x) / 2
    if y > EXP_GUARD:
        return 0.0
    return abs(float(g_hat(y)))


def _w_mag(x: float, p: KernelParams) -> float:
    """Envelope of |w_plus/minus| at frequency magnitude x (overflow-safe)."""
    c = reconstruction_constant(p.sigma)
    z = (x - p.omega_cut) / (2 * p.sigma)
    if z <= 0:
        ex = p.beta * x / 2
        return c * math.exp(min(ex, EXP_GUARD))
    expo = p.beta * x / 2 - z * z
    if expo < -EXP_GUARD:
        return 0.0
    return c * 0.5 * float(erfcx(z)) * math.exp(min(expo, EXP_GUARD))


def alias_estimate(
    p: KernelParams, step: float, freq_span_g: float = 0.0, freq_span_k: float = 0.0
) -> float:
    """Heuristic bound (safety factor 4) on trapezoid aliasing, per unit norm.

    The t-integrand has spectrum inside [-(span_g + span_k) - supp(g_hat tail)];
    images fold in at multiples of 2pi/step.
    """
    cut = 2 * math.pi / step
    xg = cut - (freq_span_g + freq_span_k)
    xw = cut - freq_span_k
    if xg <= 0 or xw <= 0:
        return math.inf
    ag = _g_hat_beta_mag(xg, p.beta) * h_total(p)
    aw = _w_mag(xw, p) * SQRT_2PI * g_beta_total(p.beta)
    return 4.0 * (ag + aw) / (2 * math.pi)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform symmetric product grid over [-t_max, t_max] x [-tprime_max, tprime_max]."""

    t_max: float
    tprime_max: float
    step: float
    rule: str = "trapezoid"

    def __post_init__(self):
        if self.rule not in ("trapezoid", "gauss"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.step <= 0 or self.t_max <= 0 or self.tprime_max <= 0:
            raise ValueError("grid extents and step must be positive")

    def _axis(self, half_width: float) -> tuple[np.ndarray, np.ndarray]:
        n = max(1, round(half_width / self.step))
        if self.rule == "gauss":
            x, w = np.polynomial.legendre.leggauss(2 * n + 1)
            hw = n * self.step
            return x * hw, w * hw
        nodes = np.arange(-n, n + 1) * self.step
        weights = np.full(nodes.shape, self.step)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        return nodes, weights

    def t_axis(self) -> tuple[np.ndarray, np.ndarray]:
        return self._axis(self.t_max)

    def tprime_axis(self) -> tuple[np.ndarray, np.ndarray]:
        return self._axis(self.tprime_max)

    @property
    def node_count(self) -> int:
        return len(self.t_axis()[0]) * len(self.tprime_axis()[0])


def choose_truncation(
    p: KernelParams,
    op_norm_product: float,
    tol: float,
    freq_span_g: float = 0.0,
    freq_span_k: float = 0.0,
    rule: str = "trapezoid",
) -> QuadratureGrid:
    """Pick (t_max, tprime_max, step) so the combined truncation and aliasing
    error of the double quadrature stays below tol.

    The three error sources each get a third of the budget.  Halving tol grows
    t_max by (beta / 2pi) ln 2.
    """
    if tol <= 0 or op_norm_product <= 0:
        raise ValueError("tol and op_norm_product must be positive")
    part = tol / (3 * op_norm_product)

    # |t| tail: (1/2pi) tail_g(T) h_total <= part, tail_g(T) <= sqrt(2pi) e^{-2piT/beta}
    tg = 2 * math.pi * part / h_total(p)
    if tg >= SQRT_2PI:
        t_max = p.beta / 2
    else:
        t_max = (p.beta / (2 * math.pi)) * math.log(SQRT_2PI / tg)
        t_max = max(t_max, p.beta / 2)

    # |t'| tail: (1/2pi) total_g * h_tail(T') <= part
    th = 2 * math.pi * part / (
        g_beta_total(p.beta) * 2 * h_peak_envelope(p) * math.sqrt(math.pi) / p.sigma
    )
    if th >= 2:
        tp_max = 1.0 / p.sigma
    else:
        tp_max = float(erfcinv(th)) / p.sigma
        tp_max = max(tp_max, 1.0 / p.sigma)

    # step from the aliasing estimate, shrinking until within budget
    span = freq_span_g + freq_span_k + p.omega_cut + p.sigma**2 * p.beta
    margin = 4.0 * p.sigma + 4.0 / p.beta
    step = 2 * math.pi / (span + margin)
    for _ in range(200):
        if alias_estimate(p, step, freq_span_g, freq_span_k) <= part:
            break
        step *= 0.8
    else:
        raise RuntimeError("could not satisfy the aliasing budget")

    # snap extents to whole steps
    t_max = math.ceil(t_max / step) * step
    tp_max = math.ceil(tp_max / step) * step
    return QuadratureGrid(t_max=t_max, tprime_max=tp_max, step=step, rule=rule)


def grid_transform_g(grid: QuadratureGrid, p: KernelParams, x):
    """sum_j w_j g_beta(t_j) e^{i x t_j}: the grid's version of sqrt(2pi) g_hat_beta."""
    t, w = grid.t_axis()
    coef = w * g_beta(t, p.beta)
    x = np.asarray(x, dtype=float)
    return np.exp(1j * np.multiply.outer(x, t)) @ coef


def grid_transform_h(grid: QuadratureGrid, p: KernelParams, nu, sign: int):
    """sum_k w_k h_{sign}(t'_k) e^{i nu t'_k}: the grid's sqrt(2pi) w_{sign}."""
    tp, w = grid.tprime_axis()
    h = h_plus(tp, p) if sign > 0 else h_minus(tp, p)
    coef = w * h
    nu = np.asarray(nu, dtype=float)
    return np.exp(1j * np.multiply.outer(nu, tp)) @ coef
