"""The two ends of the crossover.

For large T, F_T(T^{1/3} s) approaches F_GUE(2^{1/3} s); for small T,
F_T(2^{-1/2} pi^{1/4} T^{1/4} s) approaches the standard normal CDF.  Both
approaches are slow, so the printed deviations shrink but stay visible.
"""
import numpy as np

from kpzcrossover.crossover import gaussian_limit_scan, tw_limit_scan, variance_constant_check

grid = np.arange(-3.0, 1.0001, 0.5)
for T in (10.0, 50.0, 200.0):
    sup, F, G = tw_limit_scan(T, grid)
    print(f"large T = {T:6.1f}: sup |F_T - F_GUE| = {sup:.4f}")

grid = np.arange(-2.0, 2.0001, 0.5)
for T in (1e-1, 1e-2, 1e-3):
    sup, F, Phi = gaussian_limit_scan(T, grid)
    print(f"small T = {T:6.0e}: sup |F_T - Phi|   = {sup:.4f}")

# the small-T variance constant comes from a heat-kernel double integral
c = variance_constant_check()
print(f"variance constant {c:.12f} vs sqrt(pi)/2 = {np.sqrt(np.pi) / 2:.12f}")
