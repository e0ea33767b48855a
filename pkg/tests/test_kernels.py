import math

import numpy as np
import pytest
from scipy.integrate import quad

import gibbslearn.kernels as K

P1 = K.KernelParams(beta=1.0, sigma=1.0, omega_cut=6.0)


def test_frozen_constants():
    assert abs(K.f_hat(0.0, 1.0) - (2 * math.pi) ** -0.25) < 1e-14
    assert abs(K.g_hat_beta(0.0, 1.0) + 0.5) < 1e-12
    assert abs(K.g_hat_beta(0.0, 2.3) + 0.5) < 1e-12
    assert abs(K.g_beta_total(1.0) - math.sqrt(math.pi / 2)) < 1e-12
    # nu/sinh(nu) is computed via exp(-nu); sinh itself would overflow here
    big = K.g_hat(800.0)
    assert isinstance(big, float) and big == 0.0


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_f_pair_fourier_oracle(sigma):
    # f_hat(omega) = (1/sqrt(2pi)) int f(t) e^{i omega t} dt
    for omega in (0.0, 0.8, -2.5):
        val, _ = quad(
            lambda t: K.f_weight(t, sigma) * math.cos(omega * t), -40, 40, limit=400
        )
        assert abs(val / math.sqrt(2 * math.pi) - K.f_hat(omega, sigma)) < 1e-10


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_g_pair_fourier_oracle(beta):
    for nu in (0.4, -1.3, 3.0):
        re, _ = quad(
            lambda t: K.g_beta(t, beta) * math.cos(nu * t), -60, 60, limit=800
        )
        im, _ = quad(
            lambda t: K.g_beta(t, beta) * math.sin(nu * t), -60, 60, limit=800
        )
        got = (re + 1j * im) / math.sqrt(2 * math.pi)
        assert abs(got - K.g_hat_beta(nu, beta)) < 1e-8


def test_g_beta_tail_closed_form():
    for t_max in (1.0, 2.0, 4.0):
        val, _ = quad(lambda t: abs(K.g_beta(t, 1.0)), t_max, 80, limit=400)
        assert abs(2 * val - K.g_beta_tail(t_max, 1.0)) < 1e-10


def test_bohr_weights_detailed_balance():
    # w_minus / w_plus = e^{beta nu} independent of the window
    for p in (P1, K.KernelParams(beta=0.6, sigma=1.7, omega_cut=3.0)):
        for nu in (0.0, 0.9, -2.2):
            ratio = K.bohr_weight_minus(nu, p) / K.bohr_weight_plus(nu, p)
            assert abs(ratio - math.exp(p.beta * nu)) < 1e-10


def test_bohr_weight_window_shape():
    wide = K.KernelParams(beta=1.0, sigma=1.0, omega_cut=50.0)
    # far inside a wide window the erf factor saturates to 1
    c = K.reconstruction_constant(1.0)
    for nu in (0.0, 1.0, -2.0):
        assert abs(K.bohr_weight_plus(nu, wide) - c * math.exp(-nu / 2)) < 1e-10
    # window shrinks the weight monotonically
    assert K.bohr_weight_plus(0.0, P1) <= K.bohr_weight_plus(0.0, wide)


def test_h_kernels_are_inverse_transforms():
    # h_plus is the time-domain inverse of sqrt(2pi) w_plus
    p = P1
    for t in (0.0, 0.7, -1.9):
        re, _ = quad(
            lambda nu: K.bohr_weight_plus(nu, p) * math.cos(nu * t),
            -p.omega_cut - 14,
            p.omega_cut + 14,
            limit=600,
        )
        im, _ = quad(
            lambda nu: K.bohr_weight_plus(nu, p) * -math.sin(nu * t),
            -p.omega_cut - 14,
            p.omega_cut + 14,
            limit=600,
        )
        got = (re + 1j * im) / math.sqrt(2 * math.pi)
        assert abs(got - K.h_plus(t, p)) < 1e-8


def test_h_minus_mirror():
    # real weights w give h_minus(t) = h_plus(-t) = conj(h_plus(t))
    for t in (0.4, 1.3):
        assert abs(K.h_minus(t, P1) - K.h_plus(-t, P1)) < 1e-10
        assert abs(K.h_minus(t, P1) - np.conj(K.h_plus(t, P1))) < 1e-10


def test_h_envelope_and_tail_bound_actual():
    p = P1
    ts = np.linspace(-30, 30, 4001)
    vals = np.abs([K.h_plus(t, p) for t in ts])
    assert vals.max() <= K.h_peak_envelope(p) + 1e-9
    t_max = 8.0
    tail_actual, _ = quad(lambda t: abs(K.h_plus(t, p)), t_max, 60, limit=400)
    assert 2 * tail_actual <= K.h_tail(t_max, p) + 1e-9
    total_actual, _ = quad(lambda t: abs(K.h_plus(t, p)), -40, 40, limit=600)
    assert total_actual <= K.h_total(p) + 1e-9


def test_grid_transforms_match_exact_kernels():
    grid = K.choose_truncation(P1, 4.0, 1e-9, 4.0, 4.0)
    for x in (0.0, 0.9, -2.1):
        assert abs(
            K.grid_transform_g(grid, P1, x) / K.SQRT_2PI - K.g_hat_beta(x, P1.beta)
        ) < 1e-7
        assert abs(
            K.grid_transform_h(grid, P1, x, +1) / K.SQRT_2PI
            - K.bohr_weight_plus(x, P1)
        ) < 1e-6


def test_choose_truncation_posts():
    g1 = K.choose_truncation(P1, 4.0, 1e-6)
    g2 = K.choose_truncation(P1, 4.0, 1e-10)
    # tighter tolerance never shrinks the grid
    assert g2.t_max >= g1.t_max and g2.step <= g1.step
    est = K.truncation_envelope(P1, g1.t_max, g1.tprime_max)
    assert est * 4.0 <= 1e-6 * 1.001
    assert K.alias_estimate(P1, g1.step) <= 1e-6 * 1.001


def test_truncation_envelope_monotone():
    assert K.truncation_envelope(P1, 4.0, 4.0) > K.truncation_envelope(P1, 8.0, 8.0)
    assert K.g_beta_tail(6.0, 1.0) < K.g_beta_tail(2.0, 1.0)
