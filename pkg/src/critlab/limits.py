"""Simulators for the two scaling-limit objects.

The multiplicative coalescent acts on a finite vector of positive masses:
each pair (i, j) merges at rate x_i * x_j, so the total merge rate is
((sum x)^2 - sum x^2)/2 and the merging pair is a pair of distinct size-biased
draws. The excursion sampler discretizes Brownian motion with the parabolic
drift lambda*t - t^2/2, reflects at the running minimum, and reports the
maximal strictly-positive grid runs as excursion lengths.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ExcursionSet:
    """Ordered excursion lengths of one reflected-path realization."""

    lam: float
    lengths: np.ndarray  # nonincreasing, each >= step
    horizon: float
    step: float

    def largest(self):
        return float(self.lengths[0]) if self.lengths.size else 0.0


def order_mass(raw):
    """Sort nonnegative masses nonincreasing, dropping zeros."""
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 1:
        raise ValueError("mass vector must be one-dimensional")
    if np.any(arr < 0):
        raise ValueError("masses must be nonnegative")
    arr = arr[arr > 0]
    return np.sort(arr)[::-1].copy()


def simulate_coalescent(x0, duration, seed=None):
    """Run the multiplicative coalescent for ``duration`` time units.

    Gillespie stepping: exponential waiting time at the total pair rate, then
    two size-biased draws redrawn until distinct pick the merging pair. The
    returned mass vector is sorted nonincreasing.
    """
    masses = list(order_mass(x0))
    if not masses:
        raise ValueError("empty mass vector")
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    rng = np.random.default_rng(seed)
    t = 0.0
    while len(masses) > 1:
        arr = np.asarray(masses)
        total = arr.sum()
        rate = (total * total - (arr * arr).sum()) / 2.0
        if rate <= 0.0:
            break
        t += rng.exponential(1.0 / rate)
        if t > duration:
            break
        cum = np.cumsum(arr)
        while True:
            i = int(np.searchsorted(cum, rng.uniform(0.0, total), side="right"))
            j = int(np.searchsorted(cum, rng.uniform(0.0, total), side="right"))
            if i != j:
                break
        merged = masses[i] + masses[j]
        for k in sorted((i, j), reverse=True):
            masses.pop(k)
        masses.append(merged)
    return order_mass(masses)


def first_merge_time(x0, seed=None):
    """Waiting time until the first merge, exponential at the total pair rate."""
    masses = order_mass(x0)
    if masses.size < 2:
        raise ValueError("need at least two masses")
    total = masses.sum()
    rate = (total * total - (masses * masses).sum()) / 2.0
    return float(np.random.default_rng(seed).exponential(1.0 / rate))


def sample_excursions(lam, horizon=None, step=1e-3, seed=None, sigma=1.0):
    """Excursion lengths of the reflected drifting path on [0, horizon].

    The path is W(t) + lam*t - t^2/2 on a grid of mesh ``step`` (Gaussian
    increments of variance step, scaled by ``sigma``; sigma=0 gives the bare
    parabola), reflected at its running minimum. A maximal run of k strictly
    positive grid values counts as an excursion of length (k+1)*step, the
    zero-to-zero span it straddles; a run still positive at the horizon is
    censored and counts k*step. Lengths shorter than the mesh are
    unresolvable, so comparisons against other samplers must match steps.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if horizon is None:
        horizon = max(10.0, 2.0 * lam + 10.0)
    if horizon < 10.0:
        raise ValueError("horizon must be at least 10")
    n = int(round(horizon / step))
    rng = np.random.default_rng(seed)
    t = step * np.arange(1, n + 1)
    w = lam * t - 0.5 * t * t
    if sigma != 0.0:
        w += sigma * np.cumsum(rng.normal(0.0, np.sqrt(step), n))
    run_min = np.minimum(np.minimum.accumulate(w), 0.0)
    pos = w > run_min

    edges = np.diff(np.concatenate(([False], pos, [False])).astype(np.int8))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)  # exclusive
    lengths = (ends - starts + 1).astype(float) * step
    if pos.size and pos[-1]:
        lengths[-1] -= step  # censored at the horizon
    lengths = np.sort(lengths[lengths > 0])[::-1].copy()
    return ExcursionSet(lam=float(lam), lengths=lengths,
                        horizon=float(horizon), step=float(step))
