"""Quadrature rules: Gauss-Legendre panels on real and complex segments,
truncated half-lines, Airy-adapted composite rules, principal-value
integrals and the oscillatory integral G_a(x).
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .specfun import airy_modulus_phase, airy_pair


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    segment: tuple = field(default=(None, None))

    def __post_init__(self):
        if np.shape(self.nodes) != np.shape(self.weights):
            raise ValueError("nodes and weights differ in length")

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f):
        return np.sum(self.weights * f(self.nodes))

    @property
    def is_real(self):
        return not (np.iscomplexobj(self.nodes) or np.iscomplexobj(self.weights))


def concat_rules(rules):
    rules = list(rules)
    nodes = np.concatenate([r.nodes for r in rules])
    weights = np.concatenate([r.weights for r in rules])
    return QuadratureRule(nodes, weights, (rules[0].segment[0], rules[-1].segment[1]))


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [a, b]."""
    if n < 1:
        raise ValueError("need at least one node")
    if not a < b:
        raise ValueError("need a < b")
    x, w = leggauss(n)
    h = 0.5 * (b - a)
    return QuadratureRule(h * x + 0.5 * (a + b), h * w, (a, b))


def segment_rule(n: int, z0: complex, z1: complex) -> QuadratureRule:
    """Gauss-Legendre rule on the straight complex segment z0 -> z1
    (complex weights carry the orientation)."""
    if n < 1:
        raise ValueError("need at least one node")
    x, w = leggauss(n)
    h = 0.5 * (z1 - z0)
    return QuadratureRule(h * x + 0.5 * (z0 + z1), h * w, (z0, z1))


def composite_rule(breaks, per_panel: int) -> QuadratureRule:
    breaks = np.asarray(breaks, dtype=float)
    if np.any(np.diff(breaks) <= 0):
        raise ValueError("breakpoints must increase")
    return concat_rules(gauss_legendre(per_panel, a, b) for a, b in zip(breaks[:-1], breaks[1:]))


def half_line_rule(c: float, tail_length: float, panels: int = 4, per_panel: int = 20) -> QuadratureRule:
    """Composite rule on [c, c + tail_length] with panels doubling in length
    away from c.  The integrands here decay like exp(-2/3 x^{3/2}), so the
    cut at c + tail_length is the only truncation."""
    if not tail_length > 0:
        raise ValueError("tail_length must be positive")
    if panels < 1:
        raise ValueError("need at least one panel")
    lengths = 2.0 ** np.arange(panels)
    breaks = c + tail_length * np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
    return composite_rule(breaks, per_panel)


def adaptive_breaks(lo, hi, local_length, max_len=np.inf):
    """Breakpoints from lo to hi with panel length local_length(x) evaluated
    at the panel start."""
    br = [lo]
    x = lo
    while x < hi:
        x = min(x + min(local_length(x), max_len), hi)
        br.append(x)
    return np.array(br)


def airy_wavelength(x):
    """Local oscillation length of Ai(x), floored for x > -4."""
    return 2 * np.pi / np.sqrt(max(-x, 4.0))


def airy_adapted_rule(lo: float, hi: float, per_panel: int = 16, waves: float = 3.0,
                      max_len: float = 3.0) -> QuadratureRule:
    """Composite rule whose panels span `waves` local Airy wavelengths."""
    return composite_rule(adaptive_breaks(lo, hi, lambda x: waves * airy_wavelength(x), max_len),
                          per_panel)


def pv_integral(f, pole: float, window, per_panel: int = 24, panel_length: float = 2.0) -> float:
    """Cauchy principal value of the integral of f over window = (lo, hi),
    where f has a simple pole at `pole`.

    The largest interval symmetric about the pole is integrated with mirrored
    nodes, so the odd singular part cancels pairwise; the rest is an
    ordinary composite Gauss-Legendre integral.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("empty window")
    if pole == lo or pole == hi:
        raise ValueError("pole on window boundary")
    n = lambda length: max(1, int(np.ceil(length / panel_length)))
    if not lo < pole < hi:
        return float(composite_rule(np.linspace(lo, hi, n(hi - lo) + 1), per_panel).integrate(f))
    h = min(pole - lo, hi - pole)
    sym = composite_rule(np.linspace(0.0, h, n(h) + 1), per_panel)
    total = np.sum(sym.weights * (f(pole + sym.nodes) + f(pole - sym.nodes)))
    if pole - h > lo:
        total += composite_rule(np.linspace(lo, pole - h, n(pole - h - lo) + 1), per_panel).integrate(f)
    if pole + h < hi:
        total += composite_rule(np.linspace(pole + h, hi, n(hi - pole - h) + 1), per_panel).integrate(f)
    return float(total)


def airy_product_tail(x: float, y: float, u0: float, u1: float = 100.0, v_far: float = 1000.0) -> float:
    """Integral over u > u0 of Ai(x-u) Ai(y-u) / u.

    The integrand decays like u^{-3/2} with an oscillating factor.  Up to u1
    it is integrated directly.  Beyond u1 the product is split with the Airy
    modulus and phase into a slow part, integrated in v = sqrt(u) up to v_far
    and then in closed form, and a fast part, handled by one integration by
    parts.
    """
    u1 = max(u1, u0 + 10.0)
    total = 0.0
    # the product oscillates at the sum of the two Airy frequencies
    rule = composite_rule(adaptive_breaks(u0, u1, lambda u: 1.5 * airy_wavelength(min(x, y) - u)), 20)
    ax = airy_pair(x - rule.nodes)[0]
    ay = airy_pair(y - rule.nodes)[0]
    total += np.sum(rule.weights * ax * ay / rule.nodes)

    # slow part: 0.5 Mx My cos(th_x - th_y) / u, written in v = sqrt(u)
    d = abs(x - y)
    wl = 2 * np.pi / d if d > 0 else np.inf
    v0 = np.sqrt(u1)
    vr = composite_rule(adaptive_breaks(v0, v_far, lambda v: min(wl, 5.0)), 16)
    u = vr.nodes ** 2
    mx, tx = airy_modulus_phase(x - u)
    my, ty = airy_modulus_phase(y - u)
    total += np.sum(vr.weights * mx * my * np.cos(tx - ty) / vr.nodes)
    # beyond v_far: Mx My ~ 1/(pi v) and th_x - th_y ~ (y - x) v
    if d > 0:
        rest = np.cos(d * v_far) / v_far - d * (np.pi / 2 - special.sici(d * v_far)[0])
    else:
        rest = 1.0 / v_far
    total += rest / np.pi

    # fast part: 0.5 Mx My cos(th_x + th_y) / u, integrated by parts once;
    # d/du th(x - u) = -1 / (pi M(x-u)^2) by the Wronskian
    mx, tx = airy_modulus_phase(x - u1)
    my, ty = airy_modulus_phase(y - u1)
    dtheta = -(1.0 / mx**2 + 1.0 / my**2) / np.pi
    total += -0.5 * mx * my / u1 * np.sin(tx + ty) / dtheta
    return float(total)


def _ray_integral(phase, dphase, z0, direction, u_start, per_panel, waves, stop_im=40.0,
                  sqrt_param=False, u_max=None):
    """Integral of exp(i phase(z)) z^{-1/2} dz along z = z0 + s * direction.

    With sqrt_param the parameter is u = sqrt(s), which removes the
    z^{-1/2} endpoint singularity when z0 = 0.
    """
    def z_of(u):
        return z0 + (u * u if sqrt_param else u) * direction

    def length(u):
        dz = 2 * u * direction if sqrt_param else direction
        om = abs(dphase(z_of(u)) * dz) + 1e-12
        return waves * 2 * np.pi / om

    total = 0.0
    u = u_start
    while True:
        h = min(length(u), 0.5 * u + 0.05 if sqrt_param else 2.0)
        if u_max is not None:
            h = min(h, u_max - u)
        r = gauss_legendre(per_panel, u, u + h)
        z = z_of(r.nodes)
        jac = 2 * r.nodes * direction if sqrt_param else direction * np.ones_like(r.nodes)
        ph = phase(z)
        total += np.sum(r.weights * np.exp(1j * ph) / np.sqrt(z) * jac)
        u += h
        if u_max is not None and u >= u_max:
            return total
        zb = z_of(u)
        if phase(zb).imag > stop_im and (phase(z_of(u * 1.01 + 0.01)).imag > phase(zb).imag):
            return total


def oscillatory_g(a: float, x: float, per_panel: int = 20, waves: float = 1.0) -> float:
    """G_a(x) = 1/(2 pi^{3/2}) int_0^inf sin(x xi + xi^3/12 - a^2/xi + pi/4) xi^{-1/2} dxi.

    Evaluated as the imaginary part of the exponential integral along a path
    in the upper half plane where the integrand decays at both ends: a ray at
    angle pi/6 from the origin, or for x < -2 a shallow ray past the real
    saddle point followed by a pi/6 ray.
    """
    a2 = a * a

    def phase(z):
        return x * z + z**3 / 12 - a2 / z + np.pi / 4

    def dphase(z):
        return x + z**2 / 4 + (a2 / z**2 if a2 > 0 else 0.0)

    def u_min(theta):
        # below this radius exp(-a^2 sin(theta) / rho) is negligible
        return np.sqrt(a2 * np.sin(theta) / 45.0) if a2 > 0 else 0.0

    if x >= -2.0:
        th = np.pi / 6
        d = np.exp(1j * th)
        val = _ray_integral(phase, dphase, 0.0, d, u_min(th), per_panel, waves, sqrt_param=True)
    else:
        X = -x
        th = min(np.pi / 6, X**-1.5)
        d = np.exp(1j * th)
        rho1 = 3.0 * np.sqrt(X)
        val = _ray_integral(phase, dphase, 0.0, d, u_min(th), per_panel, waves, sqrt_param=True,
                            u_max=np.sqrt(rho1))
        val += _ray_integral(phase, dphase, rho1 * d, np.exp(1j * np.pi / 6), 0.0, per_panel, waves)
    return float(val.imag / (2 * np.pi**1.5))
