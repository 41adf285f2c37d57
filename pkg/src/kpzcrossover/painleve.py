"""Integro-differential route to det(I - K_sigma) on L^2(r, inf).

For a real profile sigma running from 0 to 1, the family q_t(r) solves

    q_t'' = (r + t + c(r)) q_t,   c(r) = 2 int sigma'(t) q_t(r)^2 dt,
    q_t(r) ~ Ai(t + r) as r -> inf,

and

    det(I - K_sigma)_{L^2(r, inf)} = exp(-int_r^inf (x - r) int sigma'(t) q_t(x)^2 dt dx).

For the step profile sigma' is a delta at 0 and this is Painleve II with
the Hastings-McLeod solution.  The system is solved by backward RK4 from
Airy data at r_max, with Picard iteration on the coupling field c.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson

from .kernels import CrossoverParams, kappa, sigma_t_mu_derivative
from .quadrature import composite_rule, gauss_legendre
from .specfun import airy_pair

log = logging.getLogger(__name__)


class PainleveConvergenceError(RuntimeError):
    pass


@dataclass
class QField:
    t: np.ndarray          # t nodes
    wq: np.ndarray         # quadrature weight times sigma'(t)
    r: np.ndarray          # decreasing grid r_max -> r_min
    q: np.ndarray          # q_t(r), shape (len(r), len(t))
    dq: np.ndarray         # d/dr q_t(r)
    residuals: list = field(default_factory=list)

    @property
    def h(self):
        return self.r[0] - self.r[1]

    def coupling_density(self):
        """int sigma'(t) q_t(r)^2 dt on the r grid (half the coupling field)."""
        return self.q**2 @ self.wq


def coupling_weights(T=None, mu=None, step=False, window=30.0, panels=20, per_panel=16):
    """Nodes and weights of the measure sigma'(t) dt.

    For sigma_{T,mu} with mu < 0, sigma' is a bump of width 1/kappa around
    t0 = -log(-mu) / kappa with exponential tails; window/kappa on each side
    leaves e^{-window} of the mass outside.
    """
    if step:
        return np.array([0.0]), np.array([1.0])
    if mu is None or T is None:
        raise ValueError("need T and mu, or step=True")
    mu = float(np.real(mu)) if np.isreal(mu) else mu
    if not (isinstance(mu, float) and mu < 0):
        raise ValueError("only real negative mu is supported")
    k = kappa(T)
    t0 = -np.log(-mu) / k
    rule = composite_rule(np.linspace(t0 - window / k, t0 + window / k, panels + 1), per_panel)
    p = CrossoverParams(T, 0.0, mu)
    return rule.nodes, rule.weights * sigma_t_mu_derivative(rule.nodes, p).real


def _march(t, r_max, n, h, c_half):
    """Backward RK4 for q'' = (r + t + c) q with c given at half steps
    (c_half[2i] at r_max - i h, c_half[2i+1] at the midpoint)."""
    ai, aip = airy_pair(t + r_max)
    q, p = ai.copy(), aip.copy()
    Q = np.empty((n + 1, len(t)))
    P = np.empty_like(Q)
    Q[0], P[0] = q, p
    hh = -h
    for i in range(n):
        r = r_max - i * h
        c0, cm, c1 = c_half[2 * i], c_half[2 * i + 1], c_half[2 * i + 2]
        k1q, k1p = p, (r + t + c0) * q
        q2, p2 = q + 0.5 * hh * k1q, p + 0.5 * hh * k1p
        k2q, k2p = p2, (r + 0.5 * hh + t + cm) * q2
        q3, p3 = q + 0.5 * hh * k2q, p + 0.5 * hh * k2p
        k3q, k3p = p3, (r + 0.5 * hh + t + cm) * q3
        q4, p4 = q + hh * k3q, p + hh * k3p
        k4q, k4p = p4, (r + hh + t + c1) * q4
        q = q + hh / 6 * (k1q + 2 * k2q + 2 * k3q + k4q)
        p = p + hh / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        Q[i + 1], P[i + 1] = q, p
    return Q, P


def _coupling_half_steps(Q, P, wq, h):
    """c = 2 int sigma' q^2 on grid points and, via cubic Hermite
    interpolation of q, at the midpoints between them."""
    qm = 0.5 * (Q[:-1] + Q[1:]) - h * (P[:-1] - P[1:]) / 8
    c = np.empty(2 * len(Q) - 1)
    c[0::2] = 2 * (Q**2 @ wq)
    c[1::2] = 2 * (qm**2 @ wq)
    return c


def _march_nonlinear(t, wq, r_max, n, h):
    """Backward RK4 with c evaluated from the current state (no iteration)."""
    ai, aip = airy_pair(t + r_max)
    q, p = ai.copy(), aip.copy()
    Q = np.empty((n + 1, len(t)))
    P = np.empty_like(Q)
    Q[0], P[0] = q, p
    hh = -h

    def acc(r, q):
        return (r + t + 2 * np.dot(wq, q * q)) * q

    for i in range(n):
        r = r_max - i * h
        k1q, k1p = p, acc(r, q)
        q2, p2 = q + 0.5 * hh * k1q, p + 0.5 * hh * k1p
        k2q, k2p = p2, acc(r + 0.5 * hh, q2)
        q3, p3 = q + 0.5 * hh * k2q, p + 0.5 * hh * k2p
        k3q, k3p = p3, acc(r + 0.5 * hh, q3)
        q4, p4 = q + hh * k3q, p + hh * k3p
        k4q, k4p = p4, acc(r + hh, q4)
        q = q + hh / 6 * (k1q + 2 * k2q + 2 * k3q + k4q)
        p = p + hh / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        Q[i + 1], P[i + 1] = q, p
    return Q, P


def solve_q(T=None, mu=None, *, step=False, r_max=30.0, r_min=-3.0, h=1.0 / 64, method="picard",
            tol=1e-9, max_iter=400, relax=0.5, coupling_scale=1.0, **grid) -> QField:
    """Solve for the q field on [r_min, r_max].

    method="picard" iterates c <- (1 - relax) c + relax c[q(c)] from c = 0
    until the sup change is below tol; method="march" evaluates c from the
    current state inside each RK4 stage.  coupling_scale multiplies sigma'
    (0 switches the coupling off).
    """
    if not r_min < r_max:
        raise ValueError("need r_min < r_max")
    t, wq = coupling_weights(T, mu, step, **grid)
    wq = coupling_scale * wq
    n = int(round((r_max - r_min) / h))
    r = r_max - h * np.arange(n + 1)
    if method == "march":
        Q, P = _march_nonlinear(t, wq, r_max, n, h)
        return QField(t, wq, r, Q, P)
    if method != "picard":
        raise ValueError(f"unknown method {method!r}")
    c = np.zeros(2 * n + 1)
    residuals = []
    for it in range(max_iter):
        Q, P = _march(t, r_max, n, h, c)
        c_new = _coupling_half_steps(Q, P, wq, h)
        d = float(np.max(np.abs(c_new - c)))
        residuals.append(d)
        log.debug("picard iteration %d: sup change %.3e", it, d)
        if not np.isfinite(d):
            break
        if d < tol:
            return QField(t, wq, r, Q, P, residuals)
        c = (1 - relax) * c + relax * c_new
    raise PainleveConvergenceError(
        f"painleve: Picard iteration did not converge, last residual {residuals[-1]:.3e}")


def _tail(field: QField, r, length=20.0, n=200):
    """int_{r_max}^inf (x - r) int sigma' Ai(t + x)^2 dt dx, using the Airy
    asymptotics of q beyond r_max."""
    g = gauss_legendre(n, field.r[0], field.r[0] + length)
    dens = airy_pair(g.nodes[:, None] + field.t[None, :])[0] ** 2 @ field.wq
    return float(np.sum(g.weights * (g.nodes - r) * dens)), float(np.sum(g.weights * dens))


def det_from_q(field: QField, r) -> float:
    """exp(-int_r^inf (x - r) int sigma'(t) q_t(x)^2 dt dx) from the field."""
    r_max, r_min = field.r[0], field.r[-1]
    if not r_min <= r <= r_max:
        raise ValueError("r outside the field's grid")
    x = field.r[::-1]
    dens = field.coupling_density()[::-1]
    # A(x) = int_x^{r_max} dens, B(x) = int_x^{r_max} y dens
    A = cumulative_simpson(dens, x=x, initial=0.0)
    B = cumulative_simpson(x * dens, x=x, initial=0.0)
    A, B = A[-1] - A, B[-1] - B
    j = int(np.searchsorted(x, r))
    xj = x[j]
    total = B[j] - r * A[j]
    if xj > r:
        # piece between r and the grid point above, linear in the density
        d0 = np.interp(r, x, dens)
        d1 = dens[j]
        L = xj - r
        total += L**2 * (d0 / 6 + d1 / 3)
    tail_moment, tail_mass = _tail(field, r_max)
    total += tail_moment + (r_max - r) * tail_mass
    return float(np.exp(-total))


def hastings_mcleod(r_max=12.0, r_min=-6.0, h=1.0 / 64, method="march") -> QField:
    """Painleve II q'' = (r + 2 q^2) q with q ~ Ai(r): the step profile."""
    return solve_q(step=True, r_max=r_max, r_min=r_min, h=h, method=method)
