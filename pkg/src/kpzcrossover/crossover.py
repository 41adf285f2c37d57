"""F_T(s) by the three Fredholm formulas, the GUE reference, and the
asymptotic-limit and variance-constant checks.

All three routes average a determinant D(mu) against e^{-mu} / mu over the
counterclockwise contour around the origin (or, for the Gumbel route,
convolve a density with the Gumbel weight).  The mu integral is real in
exact arithmetic; its imaginary part is kept as a residual.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from .fredholm import NystromSystem
from .kernels import (AIRY_CUTOFF, CosecantFactors, CrossoverParams, a_of, airy_kernel,
                      crossover_airy_kernel, csc_contour_length, csc_contour_nodes, full_line_rule,
                      gamma_eta, gamma_zeta, kappa, sigma_t, sigma_t_rule, symmetric_pv_rule,
                      symmetrized_kernel)
from .linalg import lu_determinant, solve
from .quadrature import (QuadratureRule, adaptive_breaks, airy_adapted_rule, airy_wavelength,
                         composite_rule, concat_rules, gauss_legendre)
from .specfun import gaussian_cdf, gumbel_weight

RESIDUAL_TOL = 1e-6


class ContourError(RuntimeError):
    pass


@dataclass(frozen=True)
class MuContourConfig:
    """Discretization of the contour: rays from -i and +i out to Re mu =
    x_max at angle -ray_angle / +ray_angle, joined by the left unit
    semicircle.  Weights include the 1/(2 pi i) normalization."""
    x_max: float = 40.0
    n_semi: int = 48
    n_ray: int = 64
    ray_angle: float = np.pi / 4
    ray_panels: int = 8

    def __post_init__(self):
        if self.x_max <= 0 or self.n_semi < 1 or self.n_ray < self.ray_panels:
            raise ValueError("invalid contour configuration")
        if not 0 <= self.ray_angle < np.pi / 2:
            raise ValueError("ray angle must lie in [0, pi/2)")

    def rule(self) -> QuadratureRule:
        th = gauss_legendre(self.n_semi, np.pi / 2, 3 * np.pi / 2)
        semi = np.exp(1j * th.nodes)
        d_semi = 1j * semi * th.weights
        # rays graded geometrically toward their start
        length = self.x_max / np.cos(self.ray_angle)
        br = np.concatenate([[0.0], np.geomspace(0.25, length, self.ray_panels)])
        u = composite_rule(br, self.n_ray // self.ray_panels)
        e = np.exp(1j * self.ray_angle)
        upper = 1j + u.nodes * e
        lower = -1j + u.nodes * np.conj(e)
        # counterclockwise: inbound along the upper ray, outbound along the lower
        nodes = np.concatenate([semi, upper, lower])
        weights = np.concatenate([d_semi, -e * u.weights, np.conj(e) * u.weights]) / (2j * np.pi)
        return QuadratureRule(nodes, weights, (1j + length * e, -1j + length * np.conj(e)))

    @property
    def min_arg(self):
        """Smallest |arg mu| on the contour."""
        return max(self.ray_angle, np.arctan2(1.0, self.x_max))


DEFAULT_CONTOUR = MuContourConfig()


def mu_average(D, rule: QuadratureRule):
    """(1/2 pi i) contour integral of e^{-mu} D(mu) / mu, per row of D."""
    mu = rule.nodes
    return np.asarray(D) @ (rule.weights * np.exp(-mu) / mu)


def _checked(value, what):
    re, im = float(np.real(value)), float(np.imag(value))
    if abs(im) > RESIDUAL_TOL * (1 + abs(re)):
        raise ContourError(f"contour under-resolved in {what}: imaginary residual {im:.3e}")
    return re, abs(im)


# formula (i): crossover Airy kernel ---------------------------------------

def airy_x_rule(T, r_values, cfg: MuContourConfig = DEFAULT_CONTOUR, per_panel=16, waves=3.0,
                depth=34.0) -> QuadratureRule:
    """x-quadrature for the symmetrized kernel sqrt(sigma(x-r)) K_Ai sqrt(sigma(y-r))
    on the full line, valid for every r in r_values and every contour node.

    sigma(x - r) decays like e^{kappa (x - r)} to the left; its poles sit at
    x = r - (log mu + 2 pi i k) / kappa, at distance >= min|arg mu| / kappa from
    the real line, so panels are kept that short near the pole zone.
    """
    k = kappa(T)
    r_values = np.atleast_1d(r_values)
    rmin, rmax = float(np.min(r_values)), float(np.max(r_values))
    mu_max = np.hypot(cfg.x_max, 1 + cfg.x_max * np.tan(cfg.ray_angle))
    lo = min(rmin - depth / k, -1.0)
    hi = AIRY_CUTOFF
    zone = (rmin - (np.log(mu_max) + 4) / k, rmax + 4 / k)
    d_min = max(cfg.min_arg / k, 0.02)

    def local_length(x):
        gap = max(zone[0] - x, x - zone[1], 0.0)
        return min(waves * airy_wavelength(x), 3.0, max(d_min, gap))

    if hi <= lo:
        hi = lo + 1.0
    return composite_rule(adaptive_breaks(lo, hi, local_length), per_panel)


def _airy_symmetric_matrix(rule):
    x, w = rule.nodes, rule.weights
    sw = np.sqrt(w)
    return sw[:, None] * airy_kernel(x[:, None], x[None, :]) * sw[None, :]


def airy_determinants(T, s, cfg: MuContourConfig = DEFAULT_CONTOUR, x_rule=None):
    """D(mu) = det(I - sqrt(sigma) K_Ai sqrt(sigma)) at every contour node, by
    direct LU factorization."""
    k, a = kappa(T), a_of(T, s)
    r = a / k
    if x_rule is None:
        x_rule = airy_x_rule(T, [r], cfg)
    P = _airy_symmetric_matrix(x_rule)
    g = np.exp(np.minimum(-k * (x_rule.nodes - r), 700.0))
    n = len(x_rule)
    out = []
    for mu in cfg.rule().nodes:
        sig = mu / (mu - g)
        # det(I - S^{1/2} P S^{1/2}) = det(I - S P)
        out.append(lu_determinant(np.eye(n) - sig[:, None] * P))
    return np.array(out)


def airy_spectral_values(T, s_values, cfg: MuContourConfig = DEFAULT_CONTOUR, x_rule=None):
    """F_T on a whole s grid from one symmetric eigendecomposition.

    With g = e^{-kappa x} and lambda = e^a / mu, I - S P = S (I - P - lambda G),
    so D(mu) = prod (theta_i - lambda) / (e^{kappa x_i} - lambda), where
    theta are the eigenvalues of G^{-1/2} (I - P) G^{-1/2}.
    Returns complex values; the imaginary parts are the residuals.
    """
    k = kappa(T)
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    a = a_of(T, s_values)
    if x_rule is None:
        x_rule = airy_x_rule(T, a / k, cfg)
    P = _airy_symmetric_matrix(x_rule)
    x = x_rule.nodes
    gi = np.exp(0.5 * k * x)
    M = gi[:, None] * (np.eye(len(x)) - P) * gi[None, :]
    theta = np.sort(np.linalg.eigvalsh(M))
    ginv = np.sort(np.exp(k * x))
    rule = cfg.rule()
    out = []
    for ai in a:
        lam = np.exp(ai) / rule.nodes
        D = np.prod((theta[:, None] - lam[None, :]) / (ginv[:, None] - lam[None, :]), axis=0)
        out.append(mu_average(D, rule))
    return np.array(out)


def _airy_mode(T):
    # the spectral route loses accuracy once kappa times the x range is large
    return "spectral" if T <= 1.0 else "direct"


def f_t_airy_complex(T, s_values, cfg: MuContourConfig = DEFAULT_CONTOUR, mode: Optional[str] = None):
    """Complex values of the mu integral for formula (i) on an s grid."""
    if not T > 0:
        raise ValueError("T must be positive")
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    mode = mode or _airy_mode(T)
    if mode == "spectral":
        return airy_spectral_values(T, s_values, cfg)
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    rule = cfg.rule()
    return np.array([mu_average(airy_determinants(T, s, cfg), rule) for s in s_values])


def f_t_airy(T, s, cfg: MuContourConfig = DEFAULT_CONTOUR, mode: Optional[str] = None) -> float:
    return _checked(f_t_airy_complex(T, [s], cfg, mode)[0], "crossover")[0]


# formula (iii): cosecant kernel -------------------------------------------

def csc_determinants(T, s, cfg: MuContourConfig = DEFAULT_CONTOUR, n=None, L=None):
    """det(I - K^csc) on the truncated vertical contour at every mu node."""
    eta, zeta = gamma_eta(T, n, L), gamma_zeta(T, n, L)
    fac = CosecantFactors(T, a_of(T, s), eta, zeta)
    m = len(eta)
    return np.array([lu_determinant(np.eye(m) - fac.matrix(mu)) for mu in cfg.rule().nodes])


def f_t_csc_complex(T, s_values, cfg: MuContourConfig = DEFAULT_CONTOUR, n=None, L=None):
    if not T > 0:
        raise ValueError("T must be positive")
    rule = cfg.rule()
    return np.array([mu_average(csc_determinants(T, s, cfg, n, L), rule)
                     for s in np.atleast_1d(np.asarray(s_values, dtype=float))])


def f_t_csc(T, s, cfg: MuContourConfig = DEFAULT_CONTOUR, n=None, L=None) -> float:
    return _checked(f_t_csc_complex(T, [s], cfg, n, L)[0], "crossover")[0]


# formula (ii): Gumbel convolution -----------------------------------------

def gumbel_density(T, rho, per_panel=20, waves=1.5, half_width=1.0):
    """f(rho) = kappa^{-1} det(I - K_{sigma_T}) tr((I - K_{sigma_T})^{-1} P_Ai) on
    L^2(rho / kappa, inf), with the principal value at the pole of sigma_T.

    Writing x = rho/kappa + u, K_{sigma_T} = A^T diag(sigma_T w) A with
    A_{t,u} = Ai(x + t); Sylvester's identity moves everything onto the t
    grid, where M_{tt'} = K_Ai(rho/kappa + t, rho/kappa + t') and
    b_t = K_Ai(rho/kappa + t, rho/kappa).  Returns (f, det, trace).
    """
    k = kappa(T)
    x0 = rho / k
    rule = symmetric_pv_rule(-30.0 / k, max(AIRY_CUTOFF - x0, half_width), per_panel, waves,
                             x_shift=x0, half_width=half_width)
    t, w = rule.nodes, rule.weights
    ws = w * sigma_t(t, T)
    z = x0 + t
    M = airy_kernel(z[:, None], z[None, :])
    b = airy_kernel(z, x0)
    A = np.eye(len(t)) - ws[:, None] * M
    det = lu_determinant(A).real
    tr = airy_kernel(x0, x0) + b @ solve(A, ws * b)
    return det * tr / k, det, tr


@dataclass
class GumbelTable:
    """f tabulated on a rho quadrature grid; independent of s."""
    T: float
    rule: QuadratureRule
    f: np.ndarray

    def value(self, s):
        a = a_of(self.T, s)
        return 1.0 - float(np.sum(self.rule.weights * gumbel_weight(self.rule.nodes - a) * self.f))


def gumbel_table(T, s_values, panel=2.0, per_panel=16, tail_tol=1e-10) -> GumbelTable:
    """Tabulate f on composite panels from below the Gumbel cutoff of the
    smallest a up to max(a, 0) + 12 kappa + 4, extended until |f| on the
    last panel falls below tail_tol."""
    k = kappa(T)
    a = a_of(T, np.atleast_1d(np.asarray(s_values, dtype=float)))
    lo = float(a.min()) - 8.0
    hi = max(float(a.max()), 0.0) + 12 * k + 4
    breaks = list(np.arange(lo, hi + panel, panel))
    rules, vals = [], []
    i = 0
    while True:
        r = gauss_legendre(per_panel, breaks[i], breaks[i] + panel)
        f = np.array([gumbel_density(T, x)[0] for x in r.nodes])
        rules.append(r)
        vals.append(f)
        i += 1
        if i >= len(breaks) - 1:
            if np.max(np.abs(f)) < tail_tol:
                break
            if breaks[i] - hi > 400:
                raise ContourError("Gumbel density tail not resolved")
            breaks.append(breaks[-1] + panel)
    return GumbelTable(T, concat_rules(rules), np.concatenate(vals))


def f_t_gumbel(T, s, table: Optional[GumbelTable] = None) -> float:
    if not T > 0:
        raise ValueError("T must be positive")
    if table is None:
        table = gumbel_table(T, [s])
    return table.value(s)


# references and limits ----------------------------------------------------

def f_gue(s, n=80) -> float:
    """Tracy-Widom GUE distribution det(I - K_Ai) on L^2(s, inf)."""
    if not np.isfinite(s):
        raise ValueError("s must be finite")
    rule = gauss_legendre(n, s, max(s, 0.0) + AIRY_CUTOFF)
    return lu_determinant(np.eye(n) - _airy_symmetric_matrix(rule)).real


def tw_limit_scan(T, s_grid, method="csc", cfg: MuContourConfig = DEFAULT_CONTOUR):
    """sup over s of |F_T(T^{1/3} s) - F_GUE(2^{1/3} s)| with the values."""
    s_grid = np.asarray(s_grid, dtype=float)
    F = evaluate(T, T ** (1 / 3) * s_grid, method, cfg).values[method]
    G = np.array([f_gue(2 ** (1 / 3) * s) for s in s_grid])
    return float(np.max(np.abs(F - G))), F, G


def gaussian_limit_scan(T, s_grid, cfg: MuContourConfig = DEFAULT_CONTOUR):
    """sup over s of |F_T(2^{-1/2} pi^{1/4} T^{1/4} s) - Phi(s)| with the values."""
    s_grid = np.asarray(s_grid, dtype=float)
    scale = 2 ** -0.5 * np.pi ** 0.25 * T ** 0.25
    F = evaluate(T, scale * s_grid, "airy", cfg).values["airy"]
    Phi = gaussian_cdf(s_grid)
    return float(np.max(np.abs(F - Phi))), F, Phi


def heat_kernel(T, X):
    return np.exp(-X**2 / (2 * T)) / np.sqrt(2 * np.pi * T)


def variance_constant_check(T=1.0, X=0.0, n_outer=64, n_inner=48) -> float:
    """T^{-1/2} int_0^T int p^2(T-S, X-Y) p^2(S, Y) / p^2(T, X) dY dS.

    S = T (1 - cos phi) / 2 absorbs the S^{-1/2} (T-S)^{-1/2} endpoint
    behaviour; for fixed S the Y integrand is a Gaussian centred at X S / T
    with variance S (T - S) / (2T), integrated over twelve widths.
    """
    ph = gauss_legendre(n_outer, 0.0, np.pi)
    total = 0.0
    for phi, wphi in zip(ph.nodes, ph.weights):
        S = 0.5 * T * (1 - np.cos(phi))
        dS = 0.5 * T * np.sin(phi)
        c, sd = X * S / T, np.sqrt(S * (T - S) / (2 * T))
        y = gauss_legendre(n_inner, c - 12 * sd, c + 12 * sd)
        inner = np.sum(y.weights * heat_kernel(T - S, X - y.nodes) ** 2 * heat_kernel(S, y.nodes) ** 2)
        total += wphi * dS * inner
    return float(total / heat_kernel(T, X) ** 2 / np.sqrt(T))


def beta_scaled(beta, T, X=0.0):
    """(T, X) at inverse temperature beta maps to (beta^4 T, beta^2 X)."""
    return beta**4 * T, beta**2 * X


# tables -------------------------------------------------------------------

METHODS = ("airy", "csc", "gumbel")


@dataclass
class DistributionTable:
    T: float
    s: np.ndarray
    values: Dict[str, np.ndarray] = field(default_factory=dict)
    residuals: Dict[str, np.ndarray] = field(default_factory=dict)
    diagnostics: Dict[str, dict] = field(default_factory=dict)


def evaluate(T, s_values: Sequence[float], methods="airy", cfg: MuContourConfig = DEFAULT_CONTOUR,
             check=True) -> DistributionTable:
    """F_T on an s grid by one or more methods.  Raw values are stored;
    with check=True a residual above tolerance raises ContourError."""
    if not T > 0:
        raise ValueError("T must be positive")
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    if isinstance(methods, str):
        methods = METHODS if methods == "all" else (methods,)
    table = DistributionTable(T, s)
    for m in methods:
        if m == "airy":
            mode = _airy_mode(T)
            z = f_t_airy_complex(T, s, cfg, mode)
            table.diagnostics[m] = {"mode": mode}
        elif m == "csc":
            L = csc_contour_length(T)
            z = f_t_csc_complex(T, s, cfg)
            table.diagnostics[m] = {"L": L, "nodes": csc_contour_nodes(T, L)}
        elif m == "gumbel":
            gt = gumbel_table(T, s)
            z = np.array([gt.value(x) for x in s], dtype=complex)
            table.diagnostics[m] = {"rho_nodes": len(gt.rule)}
        else:
            raise ValueError(f"unknown method {m!r}")
        if check:
            for v in z:
                _checked(v, "crossover")
        table.values[m] = z.real.copy()
        table.residuals[m] = np.abs(z.imag)
    return table


# single determinants ------------------------------------------------------

def half_line_determinant(T, mu, r, per_panel=16, depth=36.0) -> complex:
    """det(I - K_{sigma_{T,mu}}) on L^2(r, inf), with K_sigma(x, y) =
    int sigma_{T,mu}(t) Ai(x+t) Ai(y+t) dt by quadrature in t.

    Ai(x + t) is negligible unless t < 16 - x, where sigma is at most
    e^{kappa (16 - x - t0)}, so the x domain is cut at 16 - t0 + depth / kappa.
    """
    p = CrossoverParams(T, 0.0, mu)
    k = p.kappa
    t0 = -np.log(abs(mu)) / k
    x_hi = max(AIRY_CUTOFF - t0 + depth / k, r + 1.0)
    x_rule = airy_adapted_rule(r, x_hi, per_panel)
    t_rule = sigma_t_rule(T, mu, r, per_panel, depth=depth)
    K = crossover_airy_kernel(x_rule.nodes, x_rule.nodes, p, t_rule)
    return NystromSystem(x_rule, K).det()


def full_line_determinant(T, mu, r) -> complex:
    """det(I - sqrt(sigma(x - r)) K_Ai(x, y) sqrt(sigma(y - r))) on the whole line."""
    rule = full_line_rule(T, mu, r)
    # the s with a / kappa = r
    p = CrossoverParams(T, r * kappa(T) + np.log(np.sqrt(2 * np.pi * T)), mu)
    x = rule.nodes
    K = symmetrized_kernel(x[:, None], x[None, :], p)
    return NystromSystem(rule, K).det()
