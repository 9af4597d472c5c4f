"""
=============================================
Critical constants of the bounded-size process
=============================================

The mean-field description of the pair process is a three-dimensional ODE
system for the singleton fraction x(t) and the scaled moments s2(t), s3(t)
of the component-size distribution. Both moments blow up at a finite time
t_c, and two constants read off the blow-up shape what whole-graph
simulations can only estimate:

1) alpha, the prefactor of the s2 singularity: s2(t) ~ 1/(alpha (t_c - t)),
2) beta, the limit of s3 / s2^3.

This script solves the system, prints the constants, and verifies the two
closed-form identities that tie them back to x(t_c). It then cross-checks
the solution against a single large simulation run.
"""

import numpy as np

from critlab.ode import rate_functions_at, solve_system
from critlab.process import run_bf

sol = solve_system()
print(f"t_c   = {sol.t_c:.9f}")
print(f"alpha = {sol.alpha:.9f}")
print(f"beta  = {sol.beta:.9f}")

# Identity 1: alpha equals 1 / (1 - x(t_c)^2).
x_c = float(sol.x_at(sol.t_c))
print(f"\nx(t_c) = {x_c:.9f}")
print(f"1/(1 - x(t_c)^2)      = {1.0 / (1.0 - x_c ** 2):.9f}  (should equal alpha)")

# Identity 2: the pair-edge rate at t_c equals 1/alpha.
a0, b0, c0 = rate_functions_at(sol, sol.t_c)
print(f"pair-edge rate b0(t_c) = {b0:.9f}  (should equal 1/alpha = {1.0 / sol.alpha:.9f})")

# The Erdos-Renyi variant of the same system has t_c exactly 1.
er = solve_system(model="er")
print(f"\nER variant: t_c = {er.t_c:.9f}, alpha = {er.alpha:.6f}, beta = {er.beta:.6f}")

# Cross-check against one simulation at n = 200k: the empirical singleton
# fraction and s2 should track the ODE until s2 starts feeling the finite-n
# cutoff near t_c.
n = 200_000
grid = np.linspace(0.2, 1.05, 18)
traj = run_bf(n, float(grid[-1]), seed=7, sample_grid=grid)

x_err = np.abs(traj.x_bar - sol.x_at(grid))
s2_ode = np.interp(grid, sol.t, sol.s2)
s2_rel = np.abs(traj.s2_bar - s2_ode) / s2_ode

print(f"\nsimulation vs ODE at n = {n}:")
print(f"  max |x_bar - x(t)|          = {x_err.max():.5f}")
print(f"  max relative s2 error       = {s2_rel.max():.5f}")
print(f"  s2 at t = {grid[-1]:.2f}: simulated {traj.s2_bar[-1]:.3f}, ODE {s2_ode[-1]:.3f}")
