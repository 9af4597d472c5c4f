"""Cluster-space machinery behind the inhomogeneous-random-graph picture.

A cluster is born at time s with size 2 and gains one vertex at per-member
rate c(u), so its size path is piecewise constant. Pairs of clusters interact
through the kernel

    kappa_t(x, y) = integral_0^t w_x(u) w_y(u) b(u) du,

which this module evaluates exactly: sizes are piecewise constant between the
recorded event times, and b enters through an interpolated cumulative
integral, so the kernel reduces to a weighted sum over segments. The operator
norm rho(t) is estimated by the top eigenvalue of the sampled Gram matrix
(mass/m) * kappa_t(x_i, x_j), the standard Nystrom estimator, with batch-means
standard errors. The same kernel drives the finite-n graph sampler (connection
probability 1 - exp(-kappa_t/n)) and the Poisson branching process that
dominates it.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid

from critlab.tracker import add_vertex, find_root, merge, new_tracker

_QUAD_POINTS = 10_001


@dataclass(frozen=True)
class ClusterSample:
    """One cluster path: birth time plus attachment instants up to horizon."""

    birth: float
    jump_times: np.ndarray
    horizon: float

    def size_at(self, u):
        """Cluster size at time u: 0 before birth, else 2 + jumps so far."""
        u = np.asarray(u, dtype=float)
        size = 2 + np.searchsorted(self.jump_times, u, side="right")
        out = np.where(u < self.birth, 0, size)
        return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelEstimate:
    """Monte-Carlo operator-norm estimate at one time point."""

    t: float
    m: int
    rho_hat: float
    std_err: float


@lru_cache(maxsize=64)
def _tables(rates, t):
    """Quadrature grid with cumulative integrals of a and b on [0, t]."""
    grid = np.linspace(0.0, t, _QUAD_POINTS)
    a = np.broadcast_to(np.asarray(rates.a(grid), dtype=float), grid.shape)
    b = np.broadcast_to(np.asarray(rates.b(grid), dtype=float), grid.shape)
    cum_a = cumulative_trapezoid(a, grid, initial=0.0)
    cum_b = cumulative_trapezoid(b, grid, initial=0.0)
    return grid, cum_a, cum_b


def immigration_mass(rates, t):
    """Total cluster-birth mass on [0, t] (the integral of a)."""
    if t == 0.0:
        return 0.0
    return float(_tables(rates, t)[1][-1])


def sample_cluster(rates, t, seed=None, birth=None):
    """Draw one cluster: birth with density a(s)/int_0^t a, growth to horizon.

    The attachment stream is time-inhomogeneous with instantaneous rate
    r * c(u) at size r, simulated by thinning against the bound r (valid
    because c <= 1). ``birth`` overrides the birth draw, which is how the
    deterministic-start checks pin s = 0. Raises if the immigration mass on
    [0, t] vanishes or the horizon is not finite.
    """
    if not math.isfinite(rates.horizon):
        raise ValueError("cluster growth needs a finite rate horizon")
    if t > rates.horizon + 1e-12:
        raise ValueError(f"t={t} beyond rate horizon {rates.horizon}")
    rng = np.random.default_rng(seed)
    if birth is None:
        grid, cum_a, _ = _tables(rates, t)
        mass = cum_a[-1]
        if mass <= 0.0:
            raise ValueError("zero immigration mass on [0, t]")
        birth = float(np.interp(rng.uniform(0.0, mass), cum_a, grid))
    jumps = []
    u = float(birth)
    r = 2
    while True:
        u += rng.exponential(1.0 / r)
        if u > rates.horizon:
            break
        if rng.uniform() < float(rates.c(u)):
            jumps.append(u)
            r += 1
    return ClusterSample(birth=float(birth), jump_times=np.asarray(jumps),
                         horizon=rates.horizon)


def kernel_eval(x, y, rates, t):
    """kappa_t(x, y), exact for the piecewise-constant size paths."""
    start = max(x.birth, y.birth)
    if t <= start:
        return 0.0
    grid, _, cum_b = _tables(rates, t)
    jumps = np.concatenate((x.jump_times, y.jump_times))
    jumps = jumps[(jumps > start) & (jumps < t)]
    cuts = np.unique(np.concatenate((jumps, (start, t))))
    left = cuts[:-1]
    w = x.size_at(left) * y.size_at(left)
    db = np.diff(np.interp(cuts, grid, cum_b))
    return float(np.sum(w * db))


def _gram(clusters, rates, t):
    """Matrix of kappa_t over all cluster pairs via one segment decomposition."""
    grid, _, cum_b = _tables(rates, t)
    events = [np.asarray([c.birth for c in clusters])]
    events.extend(c.jump_times for c in clusters)
    ev = np.concatenate(events)
    cuts = np.unique(np.concatenate((ev[ev < t], (t,))))
    left = cuts[:-1]
    w = np.empty((len(clusters), left.size))
    for i, c in enumerate(clusters):
        w[i] = c.size_at(left)
    db = np.diff(np.interp(cuts, grid, cum_b))
    return (w * db) @ w.T


def _top_eigenvalue(mat, tol=1e-8, max_iter=20_000):
    """Largest eigenvalue of a PSD matrix by power iteration."""
    v = np.full(mat.shape[0], 1.0 / np.sqrt(mat.shape[0]))
    prev = 0.0
    for _ in range(max_iter):
        w = mat @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - prev) <= tol * max(norm, 1.0):
            return norm
        prev = norm
    raise RuntimeError("power iteration did not converge")


def estimate_rho(rates, t, m, seed=None, batches=4):
    """Operator-norm estimate at time t from m sampled clusters.

    rho_hat is the top eigenvalue of (mass/m) * kappa_t(x_i, x_j); the
    standard error comes from batch means: the m samples are split into
    ``batches`` disjoint groups, each re-scaled to a full estimate, and the
    spread of those estimates is divided by sqrt(batches).
    """
    if m < 2:
        raise ValueError("need at least two samples")
    mass = immigration_mass(rates, t)
    if mass <= 0.0:
        return KernelEstimate(t=float(t), m=m, rho_hat=0.0, std_err=0.0)
    rng = np.random.default_rng(seed)
    clusters = [sample_cluster(rates, t, seed=rng) for _ in range(m)]
    gram = _gram(clusters, rates, t)
    rho = _top_eigenvalue(gram) * mass / m

    batches = max(2, min(batches, m // 2))
    size = m // batches
    vals = []
    for k in range(batches):
        ix = slice(k * size, (k + 1) * size)
        vals.append(_top_eigenvalue(gram[ix, ix]) * mass / size)
    std_err = float(np.std(vals, ddof=1) / np.sqrt(batches))
    return KernelEstimate(t=float(t), m=m, rho_hat=float(rho),
                          std_err=std_err)


def _irg_components(n, rates, t, rng):
    """Sample the Poisson cluster cloud and wire it into components."""
    mass = immigration_mass(rates, t)
    count = int(rng.poisson(n * mass)) if mass > 0.0 else 0
    if count == 0:
        return [], None, np.zeros(0)
    clusters = [sample_cluster(rates, t, seed=rng) for _ in range(count)]
    state = new_tracker(count)
    kappa = _gram(clusters, rates, t)
    iu, ju = np.triu_indices(count, k=1)
    hit = rng.uniform(size=iu.size) < 1.0 - np.exp(-kappa[iu, ju] / n)
    for i, j in zip(iu[hit], ju[hit]):
        merge(state, int(i), int(j))
    vols = np.asarray([c.size_at(t) for c in clusters], dtype=float)
    return clusters, state, vols


def sample_irg(n, rates, t, seed=None):
    """Component volumes of the finite-n cluster graph, nonincreasing.

    N ~ Poisson(n * mass) clusters; each pair is joined independently with
    probability 1 - exp(-kappa_t/n); a component's volume is the sum of its
    clusters' sizes at t.
    """
    if n < 1:
        raise ValueError(f"need scale n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    clusters, state, vols = _irg_components(n, rates, t, rng)
    if not clusters:
        return np.zeros(0)
    roots = np.asarray([find_root(state, v) for v in range(len(clusters))])
    comp = np.zeros(len(clusters))
    np.add.at(comp, roots, vols)
    return np.sort(comp[comp > 0])[::-1].copy()


def first_component_volume(n, rates, t, seed=None):
    """Volume of the component containing the earliest-born cluster (0 if
    the cloud is empty). The earliest birth is the graph's analogue of the
    first immigrated doubleton."""
    rng = np.random.default_rng(seed)
    clusters, state, vols = _irg_components(n, rates, t, rng)
    if not clusters:
        return 0.0
    first = int(np.argmin([c.birth for c in clusters]))
    root = find_root(state, first)
    roots = np.asarray([find_root(state, v) for v in range(len(clusters))])
    return float(vols[roots == root].sum())


def rooted_component_volume(n, rates, t, x0, seed=None):
    """Volume of x0's component after dropping x0 into a fresh cluster cloud."""
    rng = np.random.default_rng(seed)
    clusters, state, vols = _irg_components(n, rates, t, rng)
    if not clusters:
        return float(x0.size_at(t))
    clusters = clusters + [x0]
    root_id = len(clusters) - 1
    add_vertex(state)
    kx = np.asarray([kernel_eval(x0, c, rates, t) for c in clusters[:-1]])
    hit = rng.uniform(size=kx.size) < 1.0 - np.exp(-kx / n)
    for j in np.flatnonzero(hit):
        merge(state, root_id, int(j))
    vols = np.concatenate((vols, [float(x0.size_at(t))]))
    root = find_root(state, root_id)
    roots = np.asarray([find_root(state, v) for v in range(len(clusters))])
    return float(vols[roots == root].sum())


def sample_bp_volume(x0, rates, t, generation_cap=50, volume_cap=10**6,
                     seed=None, mc_samples=64):
    """Total volume of the Poisson branching process rooted at x0.

    Each individual of type x begets Poisson(lambda_hat(x)) children, where
    lambda_hat(x) = (mass/M) * sum_k kappa_t(x, y_k) over M fresh proposal
    clusters, and the children's types are resampled from those proposals
    with probability proportional to kappa_t(x, y_k). Returns (volume,
    truncated); the caps convert a supercritical explosion into
    truncated=True instead of non-termination.
    """
    if generation_cap < 1 or volume_cap <= 0:
        raise ValueError("caps must be positive")
    rng = np.random.default_rng(seed)
    mass = immigration_mass(rates, t)
    volume = float(x0.size_at(t))
    generation = [x0]
    truncated = False
    for _ in range(generation_cap):
        children = []
        if mass > 0.0:
            for x in generation:
                proposals = [sample_cluster(rates, t, seed=rng)
                             for _ in range(mc_samples)]
                weights = np.asarray(
                    [kernel_eval(x, y, rates, t) for y in proposals])
                lam = mass * float(weights.mean())
                k = int(rng.poisson(lam)) if lam > 0.0 else 0
                if k:
                    picks = rng.choice(mc_samples, size=k,
                                       p=weights / weights.sum())
                    children.extend(proposals[i] for i in picks)
        volume += float(sum(c.size_at(t) for c in children))
        if volume > volume_cap:
            truncated = True
            break
        if not children:
            break
        generation = children
    else:
        truncated = True
    return volume, truncated
