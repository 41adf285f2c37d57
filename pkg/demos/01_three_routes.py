"""Evaluate the crossover distribution F_T(s) three ways and compare.

The crossover Airy route averages det(I - K_{sigma_{T,mu}}) over a mu
contour; the cosecant route uses a Fredholm determinant on a complex
contour; the Gumbel route convolves the Airy-kernel determinant with a
Gumbel density.  All three should agree to quadrature accuracy.
"""
import numpy as np

from kpzcrossover.crossover import evaluate, f_gue

s = np.arange(-4.0, 3.0)

for T in (0.25, 1.0, 10.0):
    table = evaluate(T, s, "all")
    print(f"T = {T}")
    print("    s        airy          csc          gumbel")
    for i, x in enumerate(s):
        a, c, g = (table.values[m][i] for m in ("airy", "csc", "gumbel"))
        print(f"{x:5.1f}  {a:.10f}  {c:.10f}  {g:.10f}")
    gap = max(np.max(np.abs(table.values["airy"] - table.values[m])) for m in ("csc", "gumbel"))
    print(f"  largest disagreement {gap:.1e}, largest imaginary residual "
          f"{max(np.max(r) for r in table.residuals.values()):.1e}\n")

# for reference, the Tracy-Widom GUE distribution itself
print("F_GUE(-2, 0, 2) =", [round(f_gue(x), 10) for x in (-2.0, 0.0, 2.0)])
