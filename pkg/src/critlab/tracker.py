"""Disjoint-set forest with incrementally maintained component statistics.

Every graph process in this package only ever needs component sizes, never
edges, so the tracker maintains exactly the quantities the simulations read:
the sum of squared component sizes (s2), the sum of cubed sizes (s3), the
largest component size, and the number of singletons. All of them are updated
in O(1) per merge on top of the usual union-find cost.
"""

from dataclasses import dataclass

import numpy as np

MERGED = "merged"
ALREADY_JOINED = "already_joined"


@dataclass
class TrackerState:
    """Union-find forest plus running component statistics.

    ``parent`` and ``size`` are plain lists indexed by dense vertex ids;
    ``size`` is only meaningful at root vertices. ``s2`` and ``s3`` are exact
    integers (Python ints never overflow), ``max_size`` is a running maximum
    and ``singleton_count`` the number of components of size one.
    """

    parent: list
    size: list
    n_vertices: int
    s2: int
    s3: int
    max_size: int
    singleton_count: int


def new_tracker(n):
    """Create a tracker over ``n`` isolated vertices.

    Raises ``ValueError`` for ``n < 1``; use :func:`empty_tracker` for the
    vertex-free starting state of growing-graph models.
    """
    if n < 1:
        raise ValueError(f"need at least one vertex, got n={n}")
    return TrackerState(
        parent=list(range(n)),
        size=[1] * n,
        n_vertices=n,
        s2=n,
        s3=n,
        max_size=1,
        singleton_count=n,
    )


def empty_tracker():
    """Tracker with no vertices at all, grown later via :func:`add_vertex`."""
    return TrackerState(parent=[], size=[], n_vertices=0, s2=0, s3=0,
                        max_size=0, singleton_count=0)


def find_root(state, v):
    """Root of ``v``'s component, with full path compression."""
    parent = state.parent
    if not 0 <= v < state.n_vertices:
        raise IndexError(f"vertex id {v} out of range [0, {state.n_vertices})")
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        parent[v], v = root, parent[v]
    return root


def merge(state, u, v):
    """Join the components of ``u`` and ``v``.

    Returns ``MERGED`` if two distinct components were united and
    ``ALREADY_JOINED`` for a no-op (a repeated edge inside one component).
    Statistics are updated exactly: merging sizes a and b adds 2ab to s2 and
    3ab(a+b) to s3. The surviving root is the larger component's root, with
    ties going to the smaller id, so outcomes are reproducible.
    """
    ru = find_root(state, u)
    rv = find_root(state, v)
    if ru == rv:
        return ALREADY_JOINED
    a, b = state.size[ru], state.size[rv]
    if b > a or (b == a and rv < ru):
        ru, rv = rv, ru
        a, b = b, a
    state.parent[rv] = ru
    state.size[ru] = a + b
    state.s2 += 2 * a * b
    state.s3 += 3 * a * b * (a + b)
    if a == 1:
        state.singleton_count -= 1
    if b == 1:
        state.singleton_count -= 1
    if a + b > state.max_size:
        state.max_size = a + b
    return MERGED


def add_vertex(state):
    """Append a fresh singleton and return its id (ids are dense)."""
    vid = state.n_vertices
    state.parent.append(vid)
    state.size.append(1)
    state.n_vertices += 1
    state.s2 += 1
    state.s3 += 1
    state.singleton_count += 1
    if state.max_size < 1:
        state.max_size = 1
    return vid


def component_masses(state):
    """All component sizes as a nonincreasing int64 array (sums to n_vertices)."""
    parent = state.parent
    if isinstance(parent, np.ndarray):
        # simulation engines hand back array-based states; vectorize those
        roots = parent == np.arange(state.n_vertices)
        out = np.asarray(state.size)[roots].astype(np.int64)
    else:
        sizes = [state.size[v] for v in range(state.n_vertices)
                 if parent[v] == v]
        out = np.asarray(sizes, dtype=np.int64)
    out[::-1].sort()
    return out


def is_singleton(state, v):
    """True iff ``v``'s component has size one."""
    return state.size[find_root(state, v)] == 1
