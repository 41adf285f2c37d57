"""Kernels for the crossover formulas: sigma profiles, the Airy kernel, the
sigma-weighted Airy kernel and its symmetrized full-line form, the
principal-value kernel of sigma_T with its Hilbert-transform split, and the
cosecant kernel on vertical contours.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .quadrature import (QuadratureRule, adaptive_breaks, airy_product_tail, airy_wavelength,
                         composite_rule, concat_rules, gauss_legendre, oscillatory_g)
from .specfun import airy_pair

C3 = 2.0 ** (-4.0 / 3.0)
CBRT2 = 2.0 ** (1.0 / 3.0)
# Ai(x)^2 < 1e-33 beyond this point
AIRY_CUTOFF = 16.0


def kappa(T):
    return 2.0 ** (-1.0 / 3.0) * T ** (1.0 / 3.0)


def a_of(T, s):
    return s - np.log(np.sqrt(2 * np.pi * T))


@dataclass(frozen=True)
class CrossoverParams:
    T: float
    s: float = 0.0
    mu: Optional[complex] = None

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")

    @property
    def kappa(self):
        return kappa(self.T)

    @property
    def a(self):
        return a_of(self.T, self.s)

    @property
    def r(self):
        """Left end kappa^{-1} a of the half-line domain."""
        return self.a / self.kappa


@dataclass(frozen=True)
class SigmaProfile:
    value: Callable
    derivative: Callable
    kind: str            # "smooth", "principal-value" or "step"
    center: float = 0.0  # transition point
    width: float = 0.0   # transition width (0 for the step)


def _check_mu(mu):
    mu = complex(mu)
    if mu.imag == 0 and mu.real > 0:
        raise ValueError("sigma pole on real line")
    if mu == 0:
        raise ValueError("mu must be nonzero")
    return mu


def sigma_t_mu(t, params: CrossoverParams):
    """sigma_{T,mu}(t) = mu / (mu - exp(-kappa t))."""
    mu = _check_mu(params.mu)
    k = params.kappa
    t = np.asarray(t, dtype=float)
    # written as 1 / (1 - exp(-kappa t) / mu) with the exponent clipped
    e = np.exp(np.minimum(-k * t - np.log(mu), 700.0))
    return 1.0 / (1.0 - e)


def sigma_t_mu_derivative(t, params: CrossoverParams):
    mu = _check_mu(params.mu)
    k = params.kappa
    t = np.asarray(t, dtype=float)
    e = np.exp(np.minimum(-k * t - np.log(mu), 350.0))
    return -k * e / (1.0 - e) ** 2


def sigma_t_mu_profile(T, mu) -> SigmaProfile:
    p = CrossoverParams(T, 0.0, _check_mu(mu))
    return SigmaProfile(lambda t: sigma_t_mu(t, p), lambda t: sigma_t_mu_derivative(t, p), "smooth",
                        center=-np.log(abs(mu)) / p.kappa, width=1.0 / p.kappa)


def sigma_t(t, T):
    """sigma_T(t) = 1 / (1 - exp(-kappa t)); simple pole at t = 0."""
    k = kappa(T)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return 1.0 / (-np.expm1(np.minimum(-k * t, 700.0)))


def sigma_tilde(t, T):
    """sigma_T(t) - 1/(kappa t), smooth with value 1/2 at t = 0."""
    k = kappa(T)
    u = k * np.asarray(t, dtype=float)
    small = np.abs(u) < 1e-3
    us = np.where(small, 1.0, u)
    with np.errstate(over="ignore"):
        big = 1.0 / (-np.expm1(np.minimum(-us, 700.0))) - 1.0 / us
    series = 0.5 + u / 12 - u**3 / 720
    return np.where(small, series, big)


def sigma_t_profile(T) -> SigmaProfile:
    k = kappa(T)

    def deriv(t):
        e = np.exp(np.minimum(-k * np.asarray(t, dtype=float), 350.0))
        return -k * e / (1.0 - e) ** 2

    return SigmaProfile(lambda t: sigma_t(t, T), deriv, "principal-value", 0.0, 1.0 / k)


def sigma_tilde_profile(T) -> SigmaProfile:
    k = kappa(T)

    def deriv(t, h=1e-5):
        return (sigma_tilde(t + h, T) - sigma_tilde(t - h, T)) / (2 * h)

    return SigmaProfile(lambda t: sigma_tilde(t, T), deriv, "smooth", 0.0, 1.0 / k)


def step_profile() -> SigmaProfile:
    return SigmaProfile(lambda t: (np.asarray(t, dtype=float) >= 0).astype(float),
                        lambda t: np.zeros_like(np.asarray(t, dtype=float)), "step")


def airy_kernel(x, y):
    """K_Ai(x, y) = (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y), broadcasting.

    Within 1e-5 of the diagonal the value at the midpoint of the diagonal,
    Ai'(m)^2 - m Ai(m)^2, is used; by symmetry the error is O((x-y)^2).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # Airy values before broadcasting, so outer-product inputs cost O(n)
    ax, px = airy_pair(x)
    ay, py = airy_pair(y)
    h = x - y
    near = np.abs(h) < 1e-5
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (ax * py - px * ay) / np.where(near, 1.0, h)
    if np.any(near):
        out = np.array(out, copy=True)
        m = (0.5 * (x + y))[near] if np.ndim(x + y) else 0.5 * (x + y)
        am, pm = airy_pair(m)
        out[near] = pm**2 - m * am**2
    return float(out) if out.ndim == 0 else out


def sigma_t_rule(T, mu, x_min, per_panel=16, waves=3.0, depth=36.0) -> QuadratureRule:
    """t-quadrature for the integral of sigma_{T,mu}(t) Ai(x+t) Ai(y+t) with
    x, y >= x_min.  The window is recentred at t0 = -log|mu| / kappa, and
    panels stay short compared to the distance of the sigma poles
    t0 + i (arg mu + 2 pi k) / kappa from the real line."""
    mu = _check_mu(mu)
    k = kappa(T)
    t0 = -np.log(abs(mu)) / k
    lo = t0 - depth / k
    hi = max(AIRY_CUTOFF - x_min, t0 + 2.0 / k)
    dist = min(abs(np.angle(mu)), 2 * np.pi - abs(np.angle(mu))) / k
    max_len = min(3.0, max(0.5 * dist, 0.02))
    return composite_rule(adaptive_breaks(lo, hi, lambda t: waves * airy_wavelength(x_min + t), max_len),
                          per_panel)


def crossover_airy_kernel(x, y, params: CrossoverParams, t_rule: Optional[QuadratureRule] = None):
    """K_sigma(x, y) = int sigma_{T,mu}(t) Ai(x+t) Ai(y+t) dt by quadrature.

    x and y may be arrays; the result has shape (len(x), len(y)) in that
    case and is a scalar for scalar input.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    if t_rule is None:
        t_rule = sigma_t_rule(params.T, params.mu, min(xs.min(), ys.min()))
    t, w = t_rule.nodes, t_rule.weights
    ws = w * sigma_t_mu(t, params)
    Ax = airy_pair(xs[:, None] + t[None, :])[0]
    Ay = Ax if ys is xs or np.array_equal(xs, ys) else airy_pair(ys[:, None] + t[None, :])[0]
    K = (Ax * ws[None, :]) @ Ay.T
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return complex(K[0, 0])
    return K


def profile_kernel(x, y, profile: SigmaProfile, per_panel=16, waves=3.0, depth=40.0):
    """int sigma(t) Ai(x+t) Ai(y+t) dt for a real smooth or step profile.

    The step profile integrates from 0; a smooth profile from
    center - depth * width, where sigma is below e^{-depth}.
    """
    if profile.kind == "principal-value":
        raise ValueError("use pv_sigma_t_kernel for profiles with a pole")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    lo = 0.0 if profile.kind == "step" else profile.center - depth * profile.width
    x_min = min(xs.min(), ys.min())
    hi = max(AIRY_CUTOFF - x_min, lo + 1.0)
    rule = composite_rule(adaptive_breaks(lo, hi, lambda t: waves * airy_wavelength(x_min + t), 3.0),
                          per_panel)
    t, w = rule.nodes, rule.weights * np.real(profile.value(rule.nodes))
    Ax = airy_pair(xs[:, None] + t[None, :])[0]
    Ay = airy_pair(ys[:, None] + t[None, :])[0]
    K = (Ax * w[None, :]) @ Ay.T
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(K[0, 0])
    return K


def symmetrized_kernel(x, y, params: CrossoverParams):
    """sqrt(sigma(x - r)) K_Ai(x, y) sqrt(sigma(y - r)) on the full line,
    r = a / kappa, principal square root."""
    sx = np.sqrt(sigma_t_mu(np.asarray(x, dtype=float) - params.r, params).astype(complex))
    sy = np.sqrt(sigma_t_mu(np.asarray(y, dtype=float) - params.r, params).astype(complex))
    return sx * airy_kernel(x, y) * sy


def full_line_rule(T, mu, r, per_panel=16, waves=3.0, depth=36.0) -> QuadratureRule:
    """x-quadrature for the symmetrized kernel: from r + t0 - depth/kappa up
    to the Airy cutoff, with the same pole-distance control as sigma_t_rule."""
    mu = _check_mu(mu)
    k = kappa(T)
    t0 = -np.log(abs(mu)) / k
    lo = min(r + t0 - depth / k, -1.0)
    dist = min(abs(np.angle(mu)), 2 * np.pi - abs(np.angle(mu))) / k
    max_len = min(3.0, max(0.5 * dist, 0.02))
    hi = max(AIRY_CUTOFF, lo + 1.0)
    return composite_rule(adaptive_breaks(lo, hi, lambda x: waves * airy_wavelength(x), max_len), per_panel)


def symmetric_pv_rule(lo, hi, per_panel=16, waves=3.0, x_shift=0.0, half_width=1.0) -> QuadratureRule:
    """t-rule on [lo, hi] whose nodes in [-half_width, half_width] are
    mirrored about 0, so a simple pole at t = 0 is integrated in the
    principal-value sense.  x_shift is the Airy argument offset used to
    size the panels."""
    h = half_width
    inner = gauss_legendre(per_panel, 0.0, h)
    left_inner = QuadratureRule(-inner.nodes[::-1], inner.weights[::-1], (-h, 0.0))
    parts = []
    if lo < -h:
        br = adaptive_breaks(h, -lo, lambda u: waves * airy_wavelength(x_shift - u), 3.0)
        parts.append(QuadratureRule(-composite_rule(br, per_panel).nodes[::-1],
                                    composite_rule(br, per_panel).weights[::-1], (lo, -h)))
    parts += [left_inner, inner]
    if hi > h:
        br = adaptive_breaks(h, hi, lambda t: waves * airy_wavelength(x_shift + t), 3.0)
        parts.append(composite_rule(br, per_panel))
    return concat_rules(parts)


def pv_sigma_t_kernel(x, y, T, t_rule: Optional[QuadratureRule] = None):
    """Principal-value kernel P.V. int sigma_T(t) Ai(x+t) Ai(y+t) dt.

    sigma_T decays like exp(kappa t) as t -> -inf, so the window is finite;
    the pole at 0 is handled by mirrored nodes.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    if t_rule is None:
        k = kappa(T)
        xm = min(xs.min(), ys.min())
        t_rule = symmetric_pv_rule(-40.0 / k, max(AIRY_CUTOFF - xm, 1.0), x_shift=xm)
    t, w = t_rule.nodes, t_rule.weights
    ws = w * sigma_t(t, T)
    Ax = airy_pair(xs[:, None] + t[None, :])[0]
    Ay = airy_pair(ys[:, None] + t[None, :])[0]
    K = (Ax * ws[None, :]) @ Ay.T
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(K[0, 0])
    return K


def sigma_tilde_integral(x: float, y: float, T: float, u_cut: Optional[float] = None) -> float:
    """int sigma~_T(t) Ai(x+t) Ai(y+t) dt over the whole line.

    sigma~_T ~ -1/(kappa t) as t -> -inf, so the integrand has a slowly
    decaying oscillatory tail; below -u_cut it is evaluated with
    airy_product_tail (sigma_T itself is exponentially small there).
    """
    k = kappa(T)
    if u_cut is None:
        u_cut = max(60.0, 40.0 / k)
    xm = min(x, y)
    hi = max(AIRY_CUTOFF - xm, 1.0)
    br = adaptive_breaks(-u_cut, hi, lambda t: 3.0 * airy_wavelength(xm + t), 3.0)
    rule = composite_rule(br, 16)
    t = rule.nodes
    body = np.sum(rule.weights * sigma_tilde(t, T) * airy_pair(x + t)[0] * airy_pair(y + t)[0])
    return float(body + airy_product_tail(x, y, u_cut) / k)


def hilbert_term(x: float, y: float, T: float) -> float:
    """kappa^{-1} P.V. int Ai(x+t) Ai(y+t) / t dt = -kappa^{-1} pi G_{(x-y)/2}((x+y)/2)."""
    return -np.pi * oscillatory_g(0.5 * (x - y), 0.5 * (x + y)) / kappa(T)


def gumbel_kernel(x, y, T):
    """K_{sigma_T}(x, y) as the sigma~_T integral plus the Hilbert term."""
    f = np.vectorize(lambda a, b: sigma_tilde_integral(a, b, T) + hilbert_term(a, b, T))
    out = f(x, y)
    return float(out) if np.ndim(out) == 0 else out


# cosecant kernel ----------------------------------------------------------

def csc_contour_length(T):
    """Half-length L of the truncated vertical contours.  Along them the
    cubic factor decays like exp(-T c3/2 y^2) in each variable."""
    return np.sqrt(40.0 / T) + 0.5


def csc_contour_nodes(T, L=None):
    """Node count for one vertical contour: enough to follow the cubic phase
    T y^3 / 3 across [-L, L]."""
    if L is None:
        L = csc_contour_length(T)
    return int(max(64, np.ceil(1.6 * T * L**3 / 3.0) + 40))


def vertical_contour(offset, T, n=None, L=None) -> QuadratureRule:
    """offset + i y, y in [-L, L], with measure dz / (2 pi i) = dy / (2 pi)."""
    if L is None:
        L = csc_contour_length(T)
    if n is None:
        n = csc_contour_nodes(T, L)
    g = gauss_legendre(n, -L, L)
    return QuadratureRule(offset + 1j * g.nodes, g.weights / (2 * np.pi), (offset - 1j * L, offset + 1j * L))


def gamma_eta(T, n=None, L=None):
    return vertical_contour(C3 / 2, T, n, L)


def gamma_zeta(T, n=None, L=None):
    return vertical_contour(-C3 / 2, T, n, L)


def _log_minus_mu(mu):
    mu = _check_mu(mu)
    return np.log(-mu)


def csc_factor(z, mu):
    """pi (-mu)^{-z} / sin(pi z), the closed form of the inner t-integral
    int mu e^{-z t} / (e^t - mu) dt for 0 < Re(-z) < 1."""
    z = np.asarray(z, dtype=complex)
    s = np.sin(np.pi * z)
    if np.any(np.abs(s) < 1e-8):
        raise ValueError("csc argument at a pole")
    return np.pi * np.exp(-z * _log_minus_mu(mu)) / s


def csc_t_integral(z, mu, per_panel=20):
    """The inner integral int mu e^{-z t} / (e^t - mu) dt by direct
    quadrature; a check on csc_factor."""
    z = complex(z)
    decay = min(-z.real, 1 + z.real)
    if decay <= 0:
        raise ValueError("need 0 < Re(-z) < 1")
    L = 40.0 / decay
    g = composite_rule(np.linspace(-L, L, int(2 * L) + 1), per_panel)
    t = g.nodes
    mu = _check_mu(mu)
    return np.sum(g.weights * mu * np.exp(-z * t) / (np.exp(t) - mu))


def cosecant_kernel(eta, eta_p, params: CrossoverParams, zeta_rule: Optional[QuadratureRule] = None):
    """K^csc(eta, eta') = int exp(-T/3 (zeta^3 - eta'^3) + 2^{1/3} a (zeta - eta'))
    2^{1/3} pi (-mu)^{-z} / sin(pi z) dzeta / (zeta - eta),  z = 2^{1/3}(zeta - eta'),
    with dzeta / (2 pi i) along Re zeta = -c3/2."""
    T, a = params.T, params.a
    if zeta_rule is None:
        zeta_rule = gamma_zeta(T)
    z, w = zeta_rule.nodes, zeta_rule.weights
    e = np.atleast_1d(np.asarray(eta, dtype=complex))
    ep = np.atleast_1d(np.asarray(eta_p, dtype=complex))
    Q = (w * np.exp(-T * z**3 / 3 + CBRT2 * a * z))[None, :] / (z[None, :] - e[:, None])
    R = CBRT2 * csc_factor(CBRT2 * (z[:, None] - ep[None, :]), params.mu) \
        * np.exp(T * ep**3 / 3 - CBRT2 * a * ep)[None, :]
    K = Q @ R
    if np.ndim(eta) == 0 and np.ndim(eta_p) == 0:
        return complex(K[0, 0])
    return K


class CosecantFactors:
    """mu-independent pieces of the cosecant Nystrom matrix on fixed
    contours; matrix(mu) returns K W for the determinant det(I - K W)."""

    def __init__(self, T, a, eta_rule: QuadratureRule, zeta_rule: QuadratureRule):
        self.T, self.a = T, a
        self.eta_rule, self.zeta_rule = eta_rule, zeta_rule
        e, we = eta_rule.nodes, eta_rule.weights
        z, wz = zeta_rule.nodes, zeta_rule.weights
        self.Q = (wz * np.exp(-T * z**3 / 3 + CBRT2 * a * z))[None, :] / (z[None, :] - e[:, None])
        self.Z = CBRT2 * (z[:, None] - e[None, :])
        s = np.sin(np.pi * self.Z)
        if np.any(np.abs(s) < 1e-8):
            raise ValueError("csc argument at a pole")
        self.S = CBRT2 * np.pi / s
        self.E = np.exp(T * e**3 / 3 - CBRT2 * a * e) * we

    def matrix(self, mu):
        R = self.S * np.exp(-self.Z * _log_minus_mu(mu)) * self.E[None, :]
        return self.Q @ R
