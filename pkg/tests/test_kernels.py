import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpzcrossover.kernels import (C3, CBRT2, CrossoverParams, airy_kernel, a_of, cosecant_kernel,
                                  crossover_airy_kernel, csc_factor, csc_t_integral, gamma_eta, gamma_zeta,
                                  gumbel_kernel, kappa, profile_kernel, pv_sigma_t_kernel, sigma_t,
                                  sigma_t_mu, sigma_t_mu_derivative, sigma_t_mu_profile, sigma_tilde,
                                  step_profile, symmetrized_kernel, vertical_contour)


def test_params():
    p = CrossoverParams(2.0, 0.5, -1.0)
    assert p.kappa == pytest.approx(1.0)
    assert p.a == pytest.approx(0.5 - np.log(np.sqrt(4 * np.pi)))
    assert a_of(2.0, 0.5) == p.a and p.r == p.a / p.kappa
    with pytest.raises(ValueError):
        CrossoverParams(0.0)
    assert C3 == pytest.approx(2 ** (-4 / 3))


def test_sigma_examples():
    for mu in (-1.0, np.exp(2.5j), -3 - 1j, 1j):
        assert sigma_t_mu(100.0, CrossoverParams(1.0, 0, mu)) == pytest.approx(1.0, abs=1e-12)
    assert sigma_t_mu(0.0, CrossoverParams(1.0, 0, -1.0)) == pytest.approx(0.5)
    with pytest.raises(ValueError, match="sigma pole on real line"):
        sigma_t_mu(0.0, CrossoverParams(1.0, 0, 2.0))


def test_sigma_derivative_finite_difference():
    p = CrossoverParams(1.0, 0, -1 + 0j)
    h = 1e-5
    fd = (sigma_t_mu(0.7 + h, p) - sigma_t_mu(0.7 - h, p)) / (2 * h)
    assert abs(sigma_t_mu_derivative(0.7, p) - fd) < 1e-7


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 50), st.floats(-8, 8))
def test_sigma_transition(T, logmu):
    mu = -np.exp(logmu)
    prof = sigma_t_mu_profile(T, mu)
    k = kappa(T)
    assert prof.center == pytest.approx(-logmu / k)
    assert abs(prof.value(prof.center + 40 / k) - 1) < 1e-8
    assert abs(prof.value(prof.center - 40 / k)) < 1e-8
    assert prof.value(prof.center).real == pytest.approx(0.5)


def test_sigma_tilde_limit():
    assert sigma_tilde(0.0, 1.0) == pytest.approx(0.5)
    t = np.array([1e-6, 1e-3 * 1.01, 0.3, -2.0])
    k = kappa(1.0)
    assert np.allclose(sigma_tilde(t, 1.0)[1:], sigma_t(t, 1.0)[1:] - 1 / (k * t[1:]), atol=1e-13)
    assert sigma_tilde(1e-6, 1.0) == pytest.approx(0.5 + k * 1e-6 / 12, abs=1e-14)


def test_step_profile_is_airy_kernel():
    assert profile_kernel(0.0, 0.0, step_profile()) == pytest.approx(0.0669874, abs=1e-6)
    x = np.linspace(-3, 4, 8)
    K = profile_kernel(x, x, step_profile())
    assert np.max(np.abs(K - airy_kernel(x[:, None], x[None, :]))) < 1e-8


def test_airy_kernel_diagonal_continuity():
    # across the 1e-5 switch the kernel stays within O(h^2) of the midpoint diagonal value
    x = 0.4
    for h in (2e-5, 1e-5 * 0.999, 2e-6):
        assert airy_kernel(x, x + h) == pytest.approx(airy_kernel(x + h / 2, x + h / 2), abs=1e-10)


def test_profile_matches_crossover_kernel():
    x = np.array([-2.0, 0.3, 1.5])
    p = CrossoverParams(1.0, 0, -1.0)
    assert np.max(np.abs(profile_kernel(x, x, sigma_t_mu_profile(1.0, -1.0)) - crossover_airy_kernel(x, x, p))) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([-1.0, -0.2 + 0.5j, np.exp(2j), -5 - 1j]))
def test_crossover_kernel_symmetric(x, y, mu):
    p = CrossoverParams(1.0, 0, mu)
    xs = np.array([x, y])
    K = crossover_airy_kernel(xs, xs, p)
    assert abs(K[0, 1] - K[1, 0]) < 1e-12
    if np.isreal(mu):
        assert np.max(np.abs(K.imag)) < 1e-12


def test_symmetrized_kernel_properties():
    p = CrossoverParams(1.0, 0.0, -1.0)
    x = np.array([-1.0, 0.2, 2.0])
    K = symmetrized_kernel(x[:, None], x[None, :], p)
    assert np.allclose(K, K.T, atol=1e-15)
    assert np.max(np.abs(K.imag)) < 1e-15
    # a very sharp profile acts as a step: rows left of r vanish
    sharp = CrossoverParams(1e9, 0.0, -1.0)
    xl = np.array([sharp.r - 1.0, sharp.r + 1.0])
    Ks = symmetrized_kernel(xl[:, None], xl[None, :], sharp)
    assert np.max(np.abs(Ks[0])) < 1e-12 and abs(Ks[1, 1]) > 0


def test_gumbel_kernel_examples():
    v = gumbel_kernel(0.5, 0.2, 1.0)
    assert v == pytest.approx(pv_sigma_t_kernel(0.5, 0.2, 1.0), abs=1e-4)
    assert v == pytest.approx(gumbel_kernel(0.2, 0.5, 1.0), abs=1e-6)


def test_contour_geometry():
    T = 1.0
    z = gamma_zeta(T).nodes
    e = gamma_eta(T).nodes
    re = np.real(-CBRT2 * (z[:, None] - e[None, :]))
    assert np.max(np.abs(re - 0.5)) < 1e-14
    w = vertical_contour(0.0, T, n=10, L=3.0).weights
    assert np.sum(w) == pytest.approx(6 / (2 * np.pi))


def test_csc_closed_form_vs_t_integral():
    T = 1.0
    z = gamma_zeta(T).nodes[10]
    ep = gamma_eta(T).nodes[20]
    arg = CBRT2 * (z - ep)
    assert abs(csc_factor(arg, -1.0) - csc_t_integral(arg, -1.0)) < 1e-6
    assert abs(csc_factor(-0.5 + 2j, -0.3 + 1j) - csc_t_integral(-0.5 + 2j, -0.3 + 1j)) < 1e-10
    with pytest.raises(ValueError):
        csc_factor(1.0, -1.0)


def test_zeta_integrand_decay():
    T = 1.0
    y = np.linspace(5, 30, 200)
    z = -C3 / 2 + 1j * y
    mag = np.abs(np.exp(-T * z**3 / 3))
    assert np.all(np.diff(mag) < 0)


def test_cosecant_kernel_truncation_doubling():
    p = CrossoverParams(1.0, 0.0, -1.0)
    e = np.array([C3 / 2 + 0.3j, C3 / 2 - 1.1j])
    base = cosecant_kernel(e, e, p)
    wide = cosecant_kernel(e, e, p, zeta_rule=gamma_zeta(1.0, n=600, L=2 * np.sqrt(40.0) + 1.0))
    assert np.max(np.abs(base - wide)) < 1e-7
