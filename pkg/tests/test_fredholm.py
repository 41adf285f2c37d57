import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpzcrossover.fredholm import NystromSystem, RankOneKernel, fredholm_det, kernel_matrix, resolvent_trace
from kpzcrossover.kernels import airy_kernel
from kpzcrossover.painleve import det_from_q, hastings_mcleod
from kpzcrossover.quadrature import gauss_legendre, half_line_rule, segment_rule
from kpzcrossover.specfun import airy_ai, airy_ai_prime


def ai(x):
    return np.vectorize(airy_ai)(x)


def test_zero_kernel():
    r = gauss_legendre(10, 0, 1)
    assert fredholm_det(lambda x, y: 0 * x * y, r) == 1


def test_rank_one_exponential():
    r = half_line_rule(0.0, 40.0)
    assert fredholm_det(lambda x, y: np.exp(-x - y), r) == pytest.approx(0.5, abs=1e-10)


def test_airy_kernel_against_painleve():
    r = gauss_legendre(60, 0.0, 16.0)
    d = fredholm_det(airy_kernel, r).real
    hm = hastings_mcleod()
    assert d == pytest.approx(det_from_q(hm, 0.0), abs=2e-4)
    assert d == pytest.approx(0.9694, abs=2e-4)


@pytest.mark.parametrize("s", [-2.0, 0.0, 2.0])
def test_airy_richardson(s):
    d60 = fredholm_det(airy_kernel, gauss_legendre(60, s, s + 16)).real
    d100 = fredholm_det(airy_kernel, gauss_legendre(100, s, s + 16)).real
    assert abs(d60 - d100) < 1e-8


def test_airy_far_right():
    assert abs(fredholm_det(airy_kernel, gauss_legendre(40, 8.0, 24.0)) - 1) < 1e-6


def test_nonfinite_entry_named():
    r = gauss_legendre(3, -1, 1)
    with pytest.raises(ValueError, match="non-finite kernel entry"):
        fredholm_det(lambda x, y: np.where(x > 0.5, np.inf, 0 * x * y), r)


def test_trace_of_airy_projection():
    P = RankOneKernel(ai, ai)
    r = half_line_rule(0.0, 20.0)
    tr = resolvent_trace(lambda x, y: 0 * x * y, P, r)
    assert tr.real == pytest.approx(airy_ai_prime(0.0) ** 2, abs=1e-6)
    assert tr.real == pytest.approx(0.0669874, abs=1e-6)


def test_geometric_series():
    u = lambda x: np.exp(-x)
    v = lambda x: 0.5 * np.exp(-2 * x)
    P = RankOneKernel(u, v)
    r = half_line_rule(0.0, 40.0)
    c = 0.5 / 3
    assert resolvent_trace(P, P, r).real == pytest.approx(c / (1 - c), abs=1e-12)


def test_complex_contour_weights():
    # K(z, w) = z w on the segment 0 -> i: det = 1 - int_0^i z^2 dz = 1 + i/3
    r = segment_rule(8, 0, 1j)
    sys_ = NystromSystem.build(lambda z, w: z * w, r)
    assert not sys_.symmetric_weights
    assert sys_.det() == pytest.approx(1 + 1j / 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rank_one_determinant_identity(seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(3, 3)) * 0.3
    fs = [lambda x: np.ones_like(x), lambda x: x, lambda x: x**2]
    K = lambda x, y: sum(c[i, j] * fs[i](x) * fs[j](y) for i in range(3) for j in range(3))
    a, b = rng.normal(size=2)
    P = RankOneKernel(lambda x: np.cos(a * x), lambda x: np.sin(b * x + 1))
    r = gauss_legendre(12, -1, 1)
    lhs = fredholm_det(lambda x, y: K(x, y) - P(x, y), r)
    dk = fredholm_det(K, r)
    rhs = dk * (1 + resolvent_trace(K, P, r))
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(dk))


def test_kernel_matrix_shape():
    K = kernel_matrix(lambda x, y: x + y, np.arange(3.0), np.arange(2.0))
    assert K.shape == (3, 2) and K[2, 1] == 3
