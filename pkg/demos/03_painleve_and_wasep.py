"""Two independent checks of the determinant and the distribution.

First the determinant det(I - K_{sigma_{T,mu}}) on L^2(r, inf) is rebuilt
from the solution of an integro-differential Painleve II equation and
compared with the Fredholm value.  Then a small weakly asymmetric exclusion
simulation is compared with F_T.  The simulated heights live on a lattice,
so the raw KS distance stays large while the midpoint distance is small.
"""
import numpy as np

from kpzcrossover.crossover import evaluate, half_line_determinant
from kpzcrossover.painleve import det_from_q, solve_q
from kpzcrossover.wasep import WasepParams, ks_distance, ks_midpoint, sample_cdf

T, mu = 1.0, -1.0
field = solve_q(T, mu)
for r in (-1.0, 0.0, 1.0):
    print(f"r = {r:4.1f}: painleve {det_from_q(field, r):.8f}  "
          f"fredholm {half_line_determinant(T, mu, r).real:.8f}")

params = WasepParams(eps=0.2, T=0.5)
cdf = sample_cdf(params, 4000, base_seed=1)
v = np.unique(cdf.values)
pts = np.concatenate([v, v + params.lam, [v[0] - params.lam]])
F = dict(zip(pts, evaluate(params.T, pts, "airy").values["airy"]))
Fn = lambda x: np.array([F[u] for u in np.atleast_1d(x)])
print(f"WASEP eps = {params.eps}, {cdf.n} replicas: raw KS {ks_distance(cdf, Fn):.3f}, "
      f"midpoint KS {ks_midpoint(cdf, Fn, 2 * params.lam):.3f}")
