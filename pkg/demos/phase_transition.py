"""Where the giant component appears, and how large it is at criticality.

The pair process delays the Erdos-Renyi phase transition: each potential
edge is replaced by a candidate pair of edges and the rule prefers the one
touching singletons, which suppresses early merging. The transition moves
from t = 1 to t_c ~ 1.176.

Two quick experiments below:
  * largest component fraction along a time grid, ER next to the pair rule;
  * the n^(2/3) scaling of the largest component exactly at each model's
    own critical time.
"""

import numpy as np

from critlab.ode import solve_system
from critlab.process import run_bf, run_er
from critlab.tracker import component_masses

sol = solve_system()

n = 100_000
grid = np.arange(0.2, 1.65, 0.1)
er_frac = np.zeros_like(grid)
bf_frac = np.zeros_like(grid)
reps = 3
for r in range(reps):
    er_frac += run_er(n, float(grid[-1]), 100 + r, grid).max_size / n
    bf_frac += run_bf(n, float(grid[-1]), 200 + r, grid).max_size / n
er_frac /= reps
bf_frac /= reps

print(f"largest component / n at n = {n} ({reps} seeds averaged)")
print(f"{'t':>5} {'er':>8} {'pair':>8}")
for t, e, b in zip(grid, er_frac, bf_frac):
    marks = ""
    if abs(t - 1.0) < 1e-9:
        marks = "  <- ER critical"
    if abs(t - 1.2) < 1e-9:
        marks = f"  <- just past t_c = {sol.t_c:.4f}"
    print(f"{t:5.2f} {e:8.4f} {b:8.4f}{marks}")

print("\nlargest component at criticality (5 seeds, medians):")
print(f"{'n':>9} {'er @ t=1':>10} {'pair @ t_c':>11}")
rows = []
for n in (10_000, 100_000, 1_000_000):
    er_tops = [run_er(n, 1.0, 300 + r, np.array([1.0])).max_size[-1]
               for r in range(5)]
    bf_tops = [float(component_masses(
        run_bf(n, sol.t_c, 400 + r, np.array([sol.t_c])).tracker)[0])
        for r in range(5)]
    rows.append((n, float(np.median(er_tops)), float(np.median(bf_tops))))
    print(f"{n:9d} {rows[-1][1]:10.0f} {rows[-1][2]:11.0f}")

ns = np.log([r[0] for r in rows])
for label, col in (("er", 1), ("pair", 2)):
    slope = np.polyfit(ns, np.log([r[col] for r in rows]), 1)[0]
    print(f"log-log slope ({label}): {slope:.3f}  (n^(2/3) scaling -> 0.667)")
