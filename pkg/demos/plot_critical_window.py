"""Rescaled largest component vs largest Brownian excursion, with pictures.

At the center of the critical window (time t_c exactly) the largest
component divided by n^(2/3) / beta^(1/3) has the law of the largest
excursion of a reflected Brownian motion with drift -s. The first two
panels overlay the two histograms at n = 10^4 and n = 10^5; the KS distance
is already at the noise floor of the replica count at both sizes.

The third panel shows how the limit law itself moves through the window:
largest-excursion histograms for drift parameter lambda = -1, 0, +1.
Comparing the process against those off-center laws needs far larger n than
the center does (the supercritical side converges like n^(-1/3)), so the
process panels stick to lambda = 0.

Writes critical_window.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import ks_2samp

from critlab.limits import sample_excursions
from critlab.ode import solve_system
from critlab.process import run_bf
from critlab.tracker import component_masses

sol = solve_system()
reps = 250

fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))

exc0 = np.array([
    sample_excursions(0.0, step=5e-4, seed=9000 + r).largest()
    for r in range(reps)
])
for ax, n in zip(axes[:2], (10_000, 100_000)):
    scale = sol.beta ** (1 / 3) / n ** (2 / 3)
    sim = np.array([
        scale * float(component_masses(
            run_bf(n, sol.t_c, 1000 + r, np.array([sol.t_c])).tracker)[0])
        for r in range(reps)
    ])
    ks = ks_2samp(sim, exc0)
    print(f"n = {n:7,}: median sim = {np.median(sim):.3f}, "
          f"median excursion = {np.median(exc0):.3f}, "
          f"KS = {ks.statistic:.3f} (p = {ks.pvalue:.2f})")

    bins = np.linspace(0, max(sim.max(), exc0.max()), 28)
    ax.hist(sim, bins=bins, density=True, alpha=0.55,
            label=f"process (n={n:,})")
    ax.hist(exc0, bins=bins, density=True, histtype="step",
            linewidth=1.6, label="excursions")
    ax.set_title(f"window center, n = {n:,}  (KS {ks.statistic:.3f})")
    ax.set_xlabel("rescaled largest component")
    ax.legend()
axes[0].set_ylabel("density")

for lam in (-1.0, 0.0, 1.0):
    vals = [sample_excursions(lam, step=5e-4, seed=9000 * int(lam + 5) + r).largest()
            for r in range(reps)]
    axes[2].hist(vals, bins=np.linspace(0, 5, 36), density=True,
                 histtype="step", linewidth=1.6, label=f"lambda = {lam:+.0f}")
axes[2].set_title("limit law across the window")
axes[2].set_xlabel("largest excursion length")
axes[2].legend()

out = pathlib.Path(__file__).with_name("critical_window.png")
fig.tight_layout()
fig.savefig(out, dpi=130)
print(f"wrote {out}")
