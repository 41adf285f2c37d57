"""Monte Carlo for the weakly asymmetric simple exclusion process with step
initial data, and the Hopf-Cole observable F_eps(T, X).

Particles start on every positive site.  Each carries a rate-one clock; at
a ring it tries to jump right with probability p and left with probability
q = 1 - p > p, and the jump is suppressed if the target is occupied.  N(t)
counts net crossings of the bond (0, 1) from right to left, and

    h(t, x) = 2 N(t) + sum_{0 < y <= x} (2 eta(t, y) - 1)     (x >= 0),
    h(t, x) = 2 N(t) - sum_{x < y <= 0} (2 eta(t, y) - 1)     (x < 0).
"""
import csv
from dataclasses import dataclass, field

import numba
import numpy as np


class WindowTooSmall(RuntimeError):
    pass


def nearest_int(x):
    """[x] = floor(x + 1/2)."""
    return int(np.floor(x + 0.5))


@dataclass(frozen=True)
class WasepParams:
    eps: float
    T: float
    X: float = 0.0

    def __post_init__(self):
        if not 0 < self.eps < 0.25:
            raise ValueError("eps must lie in (0, 1/4)")
        if not self.T >= 0:
            raise ValueError("T must be nonnegative")

    @property
    def p(self):
        return 0.5 - 0.5 * np.sqrt(self.eps)

    @property
    def q(self):
        return 0.5 + 0.5 * np.sqrt(self.eps)

    @property
    def nu(self):
        return self.p + self.q - 2 * np.sqrt(self.p * self.q)

    @property
    def lam(self):
        return 0.5 * np.log(self.q / self.p)

    @property
    def t_micro(self):
        return self.T / self.eps**2

    @property
    def x(self):
        return nearest_int(self.X / self.eps)

    @property
    def window(self):
        t = self.t_micro
        # light cone plus ten diffusive widths, never smaller than |x| + 2
        return abs(self.x) + max(int(np.ceil(t)) + int(np.ceil(10 * np.sqrt(t))), 2)


@numba.njit(cache=True)
def _run(eta, pos, t_end, p, seed):
    """Evolve the window in place.  eta covers sites -W..W (index y + W);
    pos holds particle positions in increasing order.  Returns (N, status),
    status 1 if the boundary configuration changed."""
    np.random.seed(seed)
    W = (len(eta) - 1) // 2
    n = len(pos)
    N = 0
    t = 0.0
    if n == 0:
        return N, 0
    while True:
        t += -np.log(1.0 - np.random.random()) / n
        if t > t_end:
            break
        k = np.random.randint(n)
        y = pos[k]
        z = y + 1 if np.random.random() < p else y - 1
        # sites beyond +W are frozen full, beyond -W frozen empty
        if z > W or eta[z + W] == 1:
            continue
        eta[y + W] = 0
        eta[z + W] = 1
        pos[k] = z
        if y == 1 and z == 0:
            N += 1
        elif y == 0 and z == 1:
            N -= 1
        if z == -W or y == W:
            return N, 1
    return N, 0


def initial_state(W):
    eta = np.zeros(2 * W + 1, dtype=np.int8)
    eta[W + 1:] = 1
    pos = np.arange(1, W + 1, dtype=np.int64)
    return eta, pos


def height_profile(eta, N):
    """h at every window site -W..W from occupations and the crossing count."""
    W = (len(eta) - 1) // 2
    e = 2 * eta.astype(np.int64) - 1
    h = np.empty(2 * W + 1, dtype=np.int64)
    h[W] = 2 * N
    h[W + 1:] = 2 * N + np.cumsum(e[W + 1:])
    # h(x) = h(x + 1) - e(x + 1) going left
    h[:W] = 2 * N - np.cumsum(e[1:W + 1][::-1])[::-1]
    return h


@dataclass
class WasepState:
    eta: np.ndarray
    pos: np.ndarray
    N: int
    time: float

    @property
    def W(self):
        return (len(self.eta) - 1) // 2

    def height(self, x):
        return int(height_profile(self.eta, self.N)[x + self.W])


def run_state(params: WasepParams, seed, t_micro=None, window=None) -> WasepState:
    t = params.t_micro if t_micro is None else t_micro
    W = params.window if window is None else window
    if W < abs(params.x) + 1:
        raise ValueError("window must contain the observation site")
    eta, pos = initial_state(W)
    N, status = _run(eta, pos, float(t), params.p, np.uint32(seed))
    if status:
        raise WindowTooSmall("window too small")
    return WasepState(eta, pos, int(N), float(t))


def simulate_height(params: WasepParams, seed, window=None) -> int:
    """h(t_micro, x) for one replica."""
    return run_state(params, seed, window=window).height(params.x)


def hopf_cole_value(h, params: WasepParams):
    """F_eps(T, X) = log(eps^{-1/2}/2) - lam h + nu eps^{-2} T + X^2/(2T) + log sqrt(2 pi T)."""
    e, T, X = params.eps, params.T, params.X
    return (np.log(e**-0.5 / 2) - params.lam * np.asarray(h) + params.nu * T / e**2
            + X**2 / (2 * T) + np.log(np.sqrt(2 * np.pi * T)))


def replica_seeds(base_seed, n):
    """Per-replica seeds: a hash of (base_seed, i)."""
    return np.array([np.random.SeedSequence([base_seed, i]).generate_state(1)[0] for i in range(n)],
                    dtype=np.uint32)


@numba.njit(cache=True)
def _heights(W, x, t_end, p, seeds):
    out = np.empty(len(seeds), dtype=np.int64)
    for i in range(len(seeds)):
        eta = np.zeros(2 * W + 1, dtype=np.int8)
        eta[W + 1:] = 1
        pos = np.arange(1, W + 1)
        N, status = _run(eta, pos, t_end, p, seeds[i])
        if status:
            return out, i
        h = 2 * N
        if x > 0:
            for y in range(1, x + 1):
                h += 2 * eta[y + W] - 1
        else:
            for y in range(x + 1, 1):
                h -= 2 * eta[y + W] - 1
        out[i] = h
    return out, -1


@dataclass
class EmpiricalCdf:
    values: np.ndarray          # sorted samples of F_eps + T/4!
    n: int
    base_seed: int
    heights: np.ndarray = field(repr=False, default=None)   # replica order
    seeds: np.ndarray = field(repr=False, default=None)
    samples: np.ndarray = field(repr=False, default=None)   # replica order

    def __call__(self, s):
        """Right-continuous empirical CDF."""
        return np.searchsorted(self.values, s, side="right") / self.n

    def atoms(self):
        """Distinct sample values and the CDF just before and at each."""
        v = np.unique(self.values)
        below = np.searchsorted(self.values, v, side="left") / self.n
        at = np.searchsorted(self.values, v, side="right") / self.n
        return v, below, at


def sample_cdf(params: WasepParams, n_samples, base_seed=0) -> EmpiricalCdf:
    if n_samples < 1:
        raise ValueError("need at least one sample")
    seeds = replica_seeds(base_seed, n_samples)
    h, bad = _heights(params.window, params.x, params.t_micro, params.p, seeds)
    if bad >= 0:
        raise WindowTooSmall(f"window too small (replica {bad})")
    F = hopf_cole_value(h, params) + params.T / 24
    order = np.argsort(F, kind="stable")
    return EmpiricalCdf(F[order], n_samples, base_seed, h, seeds, F)


def dump_csv(cdf: EmpiricalCdf, path):
    """Rows (replica_index, seed, h, F_eps_plus_shift) in replica order."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["replica_index", "seed", "h", "F_eps_plus_shift"])
        for i, (sd, h, f) in enumerate(zip(cdf.seeds, cdf.heights, cdf.samples)):
            w.writerow([i, int(sd), int(h), repr(float(f))])
    return path


def ks_distance(cdf: EmpiricalCdf, F):
    """sup_s |F_n(s) - F(s)| for a continuous F, attained at the atoms."""
    v, below, at = cdf.atoms()
    Fv = np.asarray(F(v), dtype=float)
    return float(max(np.max(np.abs(at - Fv)), np.max(np.abs(below - Fv))))


def ks_midpoint(cdf: EmpiricalCdf, F, spacing):
    """Distance between the empirical CDF and F halfway between lattice
    points (a continuity-corrected comparison for lattice-valued samples)."""
    v = np.unique(cdf.values)
    mid = np.concatenate([[v[0] - 0.5 * spacing], v + 0.5 * spacing])
    return float(np.max(np.abs(cdf(mid) - np.asarray(F(mid), dtype=float))))


def ks_two_sample(a: EmpiricalCdf, b: EmpiricalCdf):
    grid = np.union1d(a.values, b.values)
    return float(np.max(np.abs(a(grid) - b(grid))))
