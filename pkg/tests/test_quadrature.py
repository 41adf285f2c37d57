import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpzcrossover.quadrature import (QuadratureRule, airy_product_tail,
                                     composite_rule, gauss_legendre, half_line_rule, oscillatory_g,
                                     pv_integral, segment_rule)
from kpzcrossover.specfun import airy_ai, airy_ai_prime, airy_pair
from scipy import special

AI0P2 = airy_ai_prime(0.0) ** 2


def g_oracle(a, x):
    # mpmath evaluation of (1/(2 pi^{3/2})) int_0^inf sin(x xi + xi^3/12 - a^2/xi + pi/4) xi^{-1/2} dxi
    a, x = mp.mpf(a), mp.mpf(x)
    ph = lambda xi: x * xi + xi**3 / 12 - a**2 / xi + mp.pi / 4
    # xi in (0, c): xi = 1/w^2, the a^2 w^2 phase oscillates with zeros near w = sqrt(n pi)/a
    c = mp.mpf("0.09")
    lo = mp.quadosc(lambda w: 2 * mp.sin(ph(1 / w**2)) / w**2, [1 / mp.sqrt(c), mp.inf],
                    zeros=lambda n: mp.sqrt(n * mp.pi) / a) if a != 0 else \
        mp.quad(lambda u: 2 * mp.sin(ph(u**2)), [0, mp.sqrt(c)])
    mid = mp.quad(lambda xi: mp.sin(ph(xi)) / mp.sqrt(xi), [c, 1, 4])
    hi = mp.quadosc(lambda xi: mp.sin(ph(xi)) / mp.sqrt(xi), [4, mp.inf],
                    zeros=lambda n: mp.cbrt(12 * mp.pi * n))
    return float((lo + mid + hi) / (2 * mp.pi**1.5))


def test_gauss_legendre_examples():
    r = gauss_legendre(1, -1, 1)
    assert r.nodes[0] == 0.0 and r.weights[0] == 2.0
    assert gauss_legendre(2, -1, 1).integrate(lambda x: x**3) == pytest.approx(0.0, abs=1e-16)
    assert gauss_legendre(2, 0, 1).integrate(lambda x: x**2) == pytest.approx(1 / 3, abs=1e-15)


def test_gauss_legendre_rejects():
    with pytest.raises(ValueError):
        gauss_legendre(0, 0, 1)
    with pytest.raises(ValueError):
        gauss_legendre(3, 1, 1)
    with pytest.raises(ValueError):
        QuadratureRule(np.zeros(2), np.zeros(3))


@given(st.integers(1, 30), st.floats(-5, 5), st.floats(0.1, 5), st.data())
def test_gauss_legendre_exactness(n, a, length, data):
    b = a + length
    r = gauss_legendre(n, a, b)
    assert r.weights.sum() == pytest.approx(length, abs=1e-13)
    k = data.draw(st.integers(0, 2 * n - 1))
    exact = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    assert r.integrate(lambda x: x**k) == pytest.approx(exact, abs=1e-12 * max(1.0, abs(exact)))


def test_composite_panels_exact():
    r = composite_rule([0.0, 0.5, 2.0, 3.0], 4)
    assert r.integrate(lambda x: x**7) == pytest.approx(3.0**8 / 8, rel=1e-13)
    with pytest.raises(ValueError):
        composite_rule([0.0, 0.0, 1.0], 4)


def test_segment_rule_orientation():
    r = segment_rule(8, 1j, -1j)
    assert r.integrate(lambda z: np.ones_like(z)) == pytest.approx(-2j)
    assert not r.is_real


def test_half_line_examples():
    r = half_line_rule(0.0, 20.0)
    ai2 = r.integrate(lambda t: airy_pair(t)[0] ** 2)
    assert ai2 == pytest.approx(AI0P2, abs=1e-7)
    assert ai2 == pytest.approx(0.0669874, abs=1e-7)
    assert half_line_rule(0.0, 7.0).integrate(np.ones_like) == pytest.approx(7.0, abs=1e-13)
    r40 = half_line_rule(0.0, 40.0, panels=5)
    assert abs(r40.integrate(lambda t: airy_pair(t)[0] ** 2) - ai2) < 1e-12


def test_pv_examples():
    assert pv_integral(lambda t: 1 / t, 0.0, (-1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)
    assert pv_integral(lambda t: 1 / t, 0.0, (-1.0, 2.0)) == pytest.approx(np.log(2), abs=1e-10)
    with pytest.raises(ValueError):
        pv_integral(lambda t: 1 / t, 0.0, (0.0, 1.0))


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(0.2, 2), st.floats(0.2, 2))
def test_pv_invariants(c, left, right):
    f = lambda t: np.cos(t - c) / (t - c)
    v = pv_integral(f, c, (c - left, c + right))
    assert pv_integral(lambda t: -f(t), c, (c - left, c + right)) == pytest.approx(-v, abs=1e-14)
    g = lambda t: np.cos(t) / t
    assert pv_integral(g, 0.0, (-left, right)) == pytest.approx(v, abs=1e-10)
    # log(right / left) + int (cos(t) - 1) / t
    exact = np.log(right / left) + (special.sici(right)[1] - np.euler_gamma - np.log(right)) \
        - (special.sici(left)[1] - np.euler_gamma - np.log(left))
    assert v == pytest.approx(exact, abs=1e-10)


def test_oscillatory_g_a_zero_is_ai_bi():
    for x in (-6.0, -1.0, 0.0, 0.7, 3.0):
        ai, _, bi, _ = special.airy(x)
        assert oscillatory_g(0.0, x) == pytest.approx(ai * bi, abs=1e-10)


@pytest.mark.parametrize("a,x", [(0.1, 0.2), (0.5, -1.0), (1.0, 0.5), (0.3, -3.0)])
def test_oscillatory_g_against_mpmath(a, x):
    assert oscillatory_g(a, x) == pytest.approx(g_oracle(a, x), abs=1e-8)


def test_oscillatory_g_even_in_a_and_bounded():
    assert oscillatory_g(0.4, 0.3) == pytest.approx(oscillatory_g(-0.4, 0.3), abs=1e-15)
    # crude bound: int_0^X xi^{-1/2} = 2 sqrt(X) plus |tail| <= 2 * 12 / X^{5/2}-ish at X = 4
    bound = (2 * np.sqrt(4.0) + 1.0) / (2 * np.pi**1.5)
    for a, x in [(0.1, 0.2), (2.0, -5.0), (0.0, 10.0)]:
        assert abs(oscillatory_g(a, x)) <= bound


def pv_airy(x, y, u0=30.0):
    # P.V. int Ai(x+t) Ai(y+t) / t dt over the real line
    hi = 16.0 - min(x, y)
    f = lambda t: airy_pair(x + t)[0] * airy_pair(y + t)[0] / t
    return pv_integral(f, 0.0, (-u0, hi), per_panel=24, panel_length=1.0) - airy_product_tail(x, y, u0)


def test_pv_matches_hilbert_term():
    k = 2.0 ** (-1 / 3)
    x, y = 0.3, 0.1
    pv = pv_airy(x, y) / k
    g = np.pi * oscillatory_g((x - y) / 2, (x + y) / 2) / k
    assert pv == pytest.approx(-g, abs=1e-4)


def test_pv_hilbert_grid():
    for x in (-1.0, 0.0, 1.0):
        for y in (-1.0, 0.0, 1.0):
            assert pv_airy(x, y) == pytest.approx(-np.pi * oscillatory_g((x - y) / 2, (x + y) / 2), abs=1e-6)


def test_airy_product_tail_against_direct():
    # int_{u0}^{U} directly plus the tail beyond U
    x, y, u0 = 0.2, -0.4, 10.0
    br = [u0]
    while br[-1] < 400.0:
        br.append(min(br[-1] + 2 * np.pi / np.sqrt(br[-1] - x), 400.0))
    r = composite_rule(br, 24)
    direct = np.sum(r.weights * airy_pair(x - r.nodes)[0] * airy_pair(y - r.nodes)[0] / r.nodes)
    assert airy_product_tail(x, y, u0) == pytest.approx(direct + airy_product_tail(x, y, 400.0), abs=2e-8)
