"""Compiled event loop shared by the fixed-vertex-set edge processes.

One exponential clock at the total edge-pair rate drives the whole run; each
event draws two uniform edges and a size-capped lookup table decides which of
the two gets added. Union-find state and the running statistics live in flat
arrays so the loop jit-compiles to machine code.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@njit(cache=True)
def run_pair_rule(n, table, cap, t_end, grid, seed):
    """Simulate the two-edge-choice process, sampling stats at grid times.

    ``table`` maps the four capped endpoint component sizes (base cap+1
    digits) to 0 (add the first edge) or 1 (add the second). Returns the
    stats matrix plus the terminal union-find state and counters.
    """
    np.random.seed(seed)
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    s2 = np.int64(n)
    s3 = np.int64(n)
    max_size = np.int64(1)
    singles = np.int64(n)
    events = np.int64(0)
    doubletons = np.int64(0)

    base = cap + 1
    rate = (n * (n - 1) / 2.0) ** 2 * 2.0 / float(n) ** 3
    t = 0.0
    m = grid.shape[0]
    out = np.empty((m, 7), dtype=np.float64)
    gi = 0

    while True:
        t_next = t - np.log(1.0 - np.random.random()) / rate
        stop = t_next > t_end
        bound = t_end if stop else t_next
        while gi < m and (grid[gi] < bound or (stop and grid[gi] <= t_end)):
            out[gi, 0] = singles / n
            out[gi, 1] = s2 / n
            out[gi, 2] = s3 / n
            out[gi, 3] = max_size
            out[gi, 4] = n
            out[gi, 5] = events
            out[gi, 6] = doubletons
            gi += 1
        if stop:
            break
        t = t_next

        u1 = np.random.randint(0, n)
        r = np.random.randint(0, n - 1)
        v1 = r + 1 if r >= u1 else r
        u2 = np.random.randint(0, n)
        r = np.random.randint(0, n - 1)
        v2 = r + 1 if r >= u2 else r

        k1 = size[_find(parent, u1)] - 1
        k2 = size[_find(parent, v1)] - 1
        k3 = size[_find(parent, u2)] - 1
        k4 = size[_find(parent, v2)] - 1
        if k1 > cap:
            k1 = cap
        if k2 > cap:
            k2 = cap
        if k3 > cap:
            k3 = cap
        if k4 > cap:
            k4 = cap
        idx = ((k1 * base + k2) * base + k3) * base + k4
        if table[idx] == 0:
            eu, ev = u1, v1
        else:
            eu, ev = u2, v2

        events += 1
        ru = _find(parent, eu)
        rv = _find(parent, ev)
        if ru == rv:
            continue
        a = size[ru]
        b = size[rv]
        if b > a or (b == a and rv < ru):
            ru, rv = rv, ru
            a, b = b, a
        parent[rv] = ru
        size[ru] = a + b
        s2 += 2 * a * b
        s3 += 3 * a * b * (a + b)
        if a == 1:
            singles -= 1
            if b == 1:
                singles -= 1
                doubletons += 1
        elif b == 1:
            singles -= 1
        if a + b > max_size:
            max_size = a + b

    return out, parent, size, s2, s3, max_size, singles, events, doubletons
