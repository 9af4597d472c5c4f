"""Event-driven simulation of the edge-pair processes and the RGIVA model.

Fixed-vertex-set models (run_er, run_bf, run_bounded_size) share one compiled
event loop: a single exponential clock at the total edge-pair rate
R = C(n,2)^2 * 2/n^3, and at each event an ordered pair of uniform edges of
which the decision rule adds exactly one. RGIVA instead grows its vertex set:
doubletons immigrate at rate n*a(t), each existing vertex sprouts a new
neighbor at rate c(t), and each vertex pair gains an edge at rate b(t)/n; all
three streams are simulated by thinning against the bounds obtained from
a, b, c <= 1.

All runs record statistics only at caller-supplied grid times and return the
terminal component tracker, so callers can read exact component masses at the
stopping time.
"""

import csv
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Optional

import numpy as np

from critlab import _engine
from critlab.ode import rate_functions_at, solve_system
from critlab.tracker import TrackerState, add_vertex, empty_tracker, merge


@dataclass(frozen=True)
class Stats:
    """Statistics row at one sample time."""

    t: float
    x_bar: float
    s2_bar: float
    s3_bar: float
    max_size: int
    n_vertices: int
    event_count: int


@dataclass
class Trajectory:
    """Sampled statistics stream of one simulation run.

    Columnar arrays indexed by sample time. ``x_bar`` is the singleton
    fraction, ``s2_bar`` and ``s3_bar`` the squared/cubed component-size sums
    over n, ``event_count`` the cumulative number of process events and
    ``doubleton_count`` the cumulative number of events that created a new
    size-2 component. ``tracker`` is the terminal component state (at t_end,
    which may lie past the last sample time).
    """

    t: np.ndarray
    x_bar: np.ndarray
    s2_bar: np.ndarray
    s3_bar: np.ndarray
    max_size: np.ndarray
    n_vertices: np.ndarray
    event_count: np.ndarray
    doubleton_count: np.ndarray
    tracker: Optional[TrackerState]
    seed: int
    model: str


@dataclass(frozen=True)
class RateFunctions:
    """Time-dependent event rates (a, b, c) on [0, horizon], all in [0, 1]."""

    a: Callable
    b: Callable
    c: Callable
    horizon: float


def constant_rates(a, b, c, horizon=math.inf):
    """RateFunctions with constant values (each must lie in [0, 1])."""
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"rate {name}={v} outside [0, 1]")

    def const(v):
        return lambda t, _v=float(v): np.asarray(t, dtype=float) * 0.0 + _v

    return RateFunctions(a=const(a), b=const(b), c=const(c), horizon=horizon)


def bf_rate_functions(sol, delta=0.0):
    """Mean-field rates (a0, b0, c0) of a solved ODE system, shifted by delta.

    The shift is applied additively and clipped back into [0, 1], giving the
    lower/upper envelopes used by the coupling-sandwich experiment. Values are
    served from a dense precomputed grid (the rates are smooth, so linear
    interpolation at this resolution is far below Monte-Carlo noise and keeps
    per-event evaluation cheap).
    """
    ts = np.linspace(0.0, sol.horizon, 8192)
    tables = [np.clip(v + delta, 0.0, 1.0)
              for v in rate_functions_at(sol, ts)]

    def lookup(table):
        return lambda t, _tab=table: np.interp(t, ts, _tab)

    return RateFunctions(a=lookup(tables[0]), b=lookup(tables[1]),
                         c=lookup(tables[2]), horizon=sol.horizon)


@lru_cache(maxsize=1)
def default_horizon():
    """Simulation horizon 2*t_c shared by the fixed-vertex-set models."""
    return 2.0 * solve_system().t_c


def _check_grid(t_end, sample_grid):
    grid = np.asarray(sample_grid, dtype=float)
    if grid.ndim != 1:
        raise ValueError("sample grid must be one-dimensional")
    if grid.size:
        if np.any(np.diff(grid) <= 0):
            raise ValueError("sample grid must be strictly increasing")
        if grid[0] < 0.0 or grid[-1] > t_end:
            raise ValueError("sample grid must lie within [0, t_end]")
    return grid


def _rule_table(rule, cap):
    classes = range(1, cap + 2)  # capped size classes; cap+1 means "> cap"
    table = np.empty((cap + 1) ** 4, dtype=np.uint8)
    i = 0
    for sizes in product(classes, repeat=4):
        table[i] = 0 if rule(*sizes) else 1
        i += 1
    return table


def run_bounded_size(n, rule, t_end, seed, sample_grid, cap=1, model="bounded"):
    """Simulate the two-edge-choice process under a bounded-size rule.

    ``rule(c1, c2, c3, c4)`` sees the four endpoint component sizes capped at
    ``cap`` (the value cap+1 standing for "larger than cap") and returns
    truthy to add the first edge, falsy for the second.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 vertices, got {n}")
    horizon = default_horizon()
    if t_end > horizon + 1e-12:
        raise ValueError(f"t_end={t_end} beyond horizon {horizon:.6f}")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    grid = _check_grid(t_end, sample_grid)
    table = _rule_table(rule, cap)
    out, parent, size, s2, s3, mx, singles, events, doubles = \
        _engine.run_pair_rule(n, table, cap, float(t_end), grid,
                              int(seed) & 0xFFFFFFFF)
    state = TrackerState(parent=parent, size=size, n_vertices=n, s2=int(s2),
                         s3=int(s3), max_size=int(mx),
                         singleton_count=int(singles))
    return Trajectory(
        t=grid,
        x_bar=out[:, 0].copy(),
        s2_bar=out[:, 1].copy(),
        s3_bar=out[:, 2].copy(),
        max_size=out[:, 3].astype(np.int64),
        n_vertices=out[:, 4].astype(np.int64),
        event_count=out[:, 5].astype(np.int64),
        doubleton_count=out[:, 6].astype(np.int64),
        tracker=state,
        seed=int(seed),
        model=model,
    )


def run_bf(n, t_end, seed, sample_grid):
    """Singleton-preference process: add the first edge iff both of its
    endpoints are isolated vertices, otherwise add the second edge."""
    rule = lambda c1, c2, c3, c4: c1 == 1 and c2 == 1
    return run_bounded_size(n, rule, t_end, seed, sample_grid, cap=1,
                            model="bf")


def run_er(n, t_end, seed, sample_grid):
    """Baseline process that always adds the first edge of the pair."""
    rule = lambda c1, c2, c3, c4: True
    return run_bounded_size(n, rule, t_end, seed, sample_grid, cap=1,
                            model="er")


def _rate_value(f, t):
    v = float(f(t))
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"rate value {v} at t={t} outside [0, 1]")
    return v


def run_rgiva(n, rates, t_end, seed, sample_grid):
    """Immigration-attachment model started from the null graph.

    Thinning bounds n (immigration), |V| (attachment) and |V|(|V|-1)/(2n)
    (pair edges) dominate the true rates because a, b, c <= 1; they are
    recomputed after every step since |V| only grows. ``n`` here is the rate
    scale, not a vertex count.
    """
    if n < 1:
        raise ValueError(f"need scale n >= 1, got {n}")
    if t_end > rates.horizon + 1e-12:
        raise ValueError(f"t_end={t_end} beyond rate horizon {rates.horizon}")
    grid = _check_grid(t_end, sample_grid)
    rng = np.random.default_rng(seed)
    state = empty_tracker()
    t = 0.0
    events = 0
    immigrations = 0
    m = grid.size
    out = np.zeros((m, 7), dtype=np.float64)
    gi = 0

    while True:
        n_v = state.n_vertices
        total = n + n_v + n_v * (n_v - 1) / (2.0 * n)
        t_next = t + rng.exponential(1.0 / total)
        stop = t_next > t_end
        bound = t_end if stop else t_next
        while gi < m and (grid[gi] < bound or (stop and grid[gi] <= t_end)):
            out[gi, 0] = state.singleton_count / n
            out[gi, 1] = state.s2 / n
            out[gi, 2] = state.s3 / n
            out[gi, 3] = state.max_size
            out[gi, 4] = state.n_vertices
            out[gi, 5] = events
            out[gi, 6] = immigrations
            gi += 1
        if stop:
            break
        t = t_next

        u = rng.uniform(0.0, total)
        if u < n:
            if rng.uniform() < _rate_value(rates.a, t):
                a_ = add_vertex(state)
                b_ = add_vertex(state)
                merge(state, a_, b_)
                events += 1
                immigrations += 1
        elif u < n + n_v:
            if rng.uniform() < _rate_value(rates.c, t):
                v0 = int(u - n)  # uniform over the existing vertices
                w = add_vertex(state)
                merge(state, v0, w)
                events += 1
        else:
            if n_v >= 2 and rng.uniform() < _rate_value(rates.b, t):
                i = int(rng.integers(n_v))
                j = int(rng.integers(n_v - 1))
                if j >= i:
                    j += 1
                merge(state, i, j)
                events += 1

    return Trajectory(
        t=grid,
        x_bar=out[:, 0].copy(),
        s2_bar=out[:, 1].copy(),
        s3_bar=out[:, 2].copy(),
        max_size=out[:, 3].astype(np.int64),
        n_vertices=out[:, 4].astype(np.int64),
        event_count=out[:, 5].astype(np.int64),
        doubleton_count=out[:, 6].astype(np.int64),
        tracker=state,
        seed=int(seed),
        model="rgiva",
    )


def snapshot_stats(traj, t):
    """Stats at the latest sample time <= t (step interpolation)."""
    idx = int(np.searchsorted(traj.t, t, side="right")) - 1
    if idx < 0:
        raise ValueError(f"t={t} precedes the first sample time {traj.t[0]}")
    return Stats(
        t=float(traj.t[idx]),
        x_bar=float(traj.x_bar[idx]),
        s2_bar=float(traj.s2_bar[idx]),
        s3_bar=float(traj.s3_bar[idx]),
        max_size=int(traj.max_size[idx]),
        n_vertices=int(traj.n_vertices[idx]),
        event_count=int(traj.event_count[idx]),
    )


def write_csv(traj, path):
    """Write the sampled statistics as CSV; ``path`` may be a file object."""
    if hasattr(path, "write"):
        _csv_to(traj, path)
    else:
        with open(path, "w", newline="") as fh:
            _csv_to(traj, fh)


def _csv_to(traj, fh):
    w = csv.writer(fh)
    w.writerow(["t", "x_bar", "s2_bar", "s3_bar", "max_size", "n_vertices"])
    for i in range(traj.t.size):
        w.writerow([repr(float(traj.t[i])), repr(float(traj.x_bar[i])),
                    repr(float(traj.s2_bar[i])),
                    repr(float(traj.s3_bar[i])),
                    int(traj.max_size[i]), int(traj.n_vertices[i])])


_JSON_COLUMNS = ("t", "x_bar", "s2_bar", "s3_bar", "max_size", "n_vertices",
                 "event_count", "doubleton_count")


def write_json(traj, path):
    """Write the statistics stream as JSON (terminal tracker is not kept).

    ``path`` may be a file object.
    """
    doc = {"model": traj.model, "seed": traj.seed}
    for col in _JSON_COLUMNS:
        doc[col] = getattr(traj, col).tolist()
    if hasattr(path, "write"):
        json.dump(doc, path)
    else:
        with open(path, "w") as fh:
            json.dump(doc, fh)


def read_json(path):
    """Rebuild a Trajectory written by :func:`write_json` (tracker is None)."""
    with open(path) as fh:
        doc = json.load(fh)
    cols = {}
    for col in _JSON_COLUMNS:
        dtype = np.float64 if col in ("t", "x_bar", "s2_bar", "s3_bar") \
            else np.int64
        cols[col] = np.asarray(doc[col], dtype=dtype)
    return Trajectory(tracker=None, seed=doc["seed"], model=doc["model"],
                      **cols)
