from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlab.tracker import (
    ALREADY_JOINED,
    MERGED,
    add_vertex,
    component_masses,
    empty_tracker,
    find_root,
    is_singleton,
    merge,
    new_tracker,
)


def brute_force_stats(state):
    """Recompute (s2, s3, max_size, singleton_count) from scratch."""
    counts = Counter(find_root(state, v) for v in range(state.n_vertices))
    sizes = list(counts.values())
    return (
        sum(s * s for s in sizes),
        sum(s * s * s for s in sizes),
        max(sizes, default=0),
        sum(1 for s in sizes if s == 1),
    )


def test_new_tracker_small():
    st_ = new_tracker(4)
    assert (st_.s2, st_.s3, st_.max_size, st_.singleton_count) == (4, 4, 1, 4)


def test_new_tracker_single_vertex():
    st_ = new_tracker(1)
    assert st_.s2 == 1 and st_.s3 == 1


def test_new_tracker_rejects_zero():
    with pytest.raises(ValueError):
        new_tracker(0)


def test_vertex_conservation_large():
    st_ = new_tracker(10**6)
    assert int(component_masses(st_).sum()) == 10**6


def test_merge_sizes_two_and_three():
    st_ = new_tracker(5)
    merge(st_, 0, 1)
    merge(st_, 2, 3)
    merge(st_, 3, 4)
    s2, s3 = st_.s2, st_.s3
    assert merge(st_, 0, 2) == MERGED
    assert st_.s2 - s2 == 12
    assert st_.s3 - s3 == 90  # 5**3 - 2**3 - 3**3


def test_merge_two_singletons():
    st_ = new_tracker(2)
    merge(st_, 0, 1)
    assert st_.s2 == 4 and st_.s3 == 8  # deltas 2 and 6 over the fresh state
    assert st_.max_size == 2 and st_.singleton_count == 0


def test_merge_within_component_is_noop():
    st_ = new_tracker(3)
    merge(st_, 0, 1)
    before = (st_.s2, st_.s3, st_.max_size, st_.singleton_count)
    assert merge(st_, 1, 0) == ALREADY_JOINED
    assert (st_.s2, st_.s3, st_.max_size, st_.singleton_count) == before


def test_merge_rejects_bad_id():
    st_ = new_tracker(3)
    with pytest.raises(IndexError):
        merge(st_, 0, 3)
    with pytest.raises(IndexError):
        find_root(st_, -1)


def test_add_vertex_to_empty():
    st_ = empty_tracker()
    v = add_vertex(st_)
    assert v == 0
    assert st_.n_vertices == 1 and st_.s2 == 1


def test_add_then_merge():
    st_ = new_tracker(1)
    v = add_vertex(st_)
    merge(st_, 0, v)
    assert st_.size[find_root(st_, 0)] == 2


def test_doubleton_growth():
    k = 7
    st_ = empty_tracker()
    for _ in range(k):
        u = add_vertex(st_)
        v = add_vertex(st_)
        merge(st_, u, v)
    assert st_.s2 == 4 * k
    assert np.array_equal(component_masses(st_), np.full(k, 2))


def test_component_masses_sorted():
    st_ = new_tracker(6)
    merge(st_, 0, 1)
    merge(st_, 1, 2)  # size 3
    merge(st_, 4, 5)  # size 2, vertex 3 stays a singleton
    assert component_masses(st_).tolist() == [3, 2, 1]


def test_component_masses_all_singletons():
    assert component_masses(new_tracker(5)).tolist() == [1, 1, 1, 1, 1]


def test_component_masses_single_block():
    n = 9
    st_ = new_tracker(n)
    for v in range(1, n):
        merge(st_, 0, v)
    assert component_masses(st_).tolist() == [n]


def test_is_singleton():
    st_ = new_tracker(3)
    assert is_singleton(st_, 0)
    merge(st_, 0, 1)
    assert not is_singleton(st_, 0)
    assert not is_singleton(st_, 1)
    merge(st_, 1, 0)  # no-op, still size 2
    assert not is_singleton(st_, 0)
    assert is_singleton(st_, 2)


def test_merge_commutes():
    a = new_tracker(4)
    b = new_tracker(4)
    merge(a, 0, 1)
    merge(b, 1, 0)
    merge(a, 2, 0)
    merge(b, 0, 2)
    assert (a.s2, a.s3, a.max_size, a.singleton_count) == \
           (b.s2, b.s3, b.max_size, b.singleton_count)
    assert np.array_equal(component_masses(a), component_masses(b))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_incremental_stats_match_brute_force(data):
    n = data.draw(st.integers(min_value=1, max_value=40))
    pairs = data.draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
        max_size=80,
    ))
    st_ = new_tracker(n)
    prev_max, prev_singletons = st_.max_size, st_.singleton_count
    for u, v in pairs:
        if u == v:
            continue  # edges join distinct vertices in every model here
        merge(st_, u, v)
        assert brute_force_stats(st_) == \
               (st_.s2, st_.s3, st_.max_size, st_.singleton_count)
        assert st_.s2 >= n and st_.s3 >= n
        assert st_.s3 <= st_.max_size * st_.s2
        assert st_.max_size >= prev_max
        assert st_.singleton_count <= prev_singletons
        prev_max, prev_singletons = st_.max_size, st_.singleton_count
    masses = component_masses(st_)
    assert int(masses.sum()) == n
    assert np.all(np.diff(masses) <= 0)
