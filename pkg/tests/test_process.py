import numpy as np
import pytest

from critlab.process import (
    RateFunctions,
    bf_rate_functions,
    constant_rates,
    default_horizon,
    read_json,
    run_bf,
    run_bounded_size,
    run_er,
    run_rgiva,
    snapshot_stats,
    write_csv,
    write_json,
)
from critlab.tracker import component_masses

COLUMNS = ("t", "x_bar", "s2_bar", "s3_bar", "max_size", "n_vertices",
           "event_count", "doubleton_count")


def trajectories_equal(a, b):
    return all(np.array_equal(getattr(a, c), getattr(b, c)) for c in COLUMNS)


def test_n2_first_event_forced():
    # only one possible edge; the first event must add it, later ones are no-ops
    saw_event = False
    for seed in range(40):
        traj = run_bf(2, 2.0, seed, [2.0])
        if traj.event_count[-1] > 0:
            saw_event = True
            assert traj.max_size[-1] == 2
            assert traj.tracker.s2 == 4
            assert component_masses(traj.tracker).tolist() == [2]
    assert saw_event


def test_mean_event_count_matches_total_rate():
    n = 10**4
    rate = (n * (n - 1) / 2) ** 2 * 2 / n**3
    counts = [run_bf(n, 1.0, seed, [1.0]).event_count[0] for seed in range(50)]
    se = np.sqrt(rate / 50)  # Poisson(rate * t) at t = 1
    assert abs(np.mean(counts) - rate) < 3 * se


def test_bf_subcritical_max_sublinear():
    sizes = []
    for n in (10**4, 10**5, 10**6):
        mx = [run_bf(n, 1.0, seed, [1.0]).max_size[0] for seed in range(3)]
        sizes.append(np.mean(mx))
    slope = np.polyfit(np.log([1e4, 1e5, 1e6]), np.log(sizes), 1)[0]
    assert slope < 0.4


def test_er_critical_max_power_law():
    sizes = []
    for n in (10**4, 10**5, 10**6):
        mx = [run_er(n, 1.0, seed, [1.0]).max_size[0] for seed in range(5)]
        sizes.append(np.mean(mx))
    slope = np.polyfit(np.log([1e4, 1e5, 1e6]), np.log(sizes), 1)[0]
    assert 0.5 <= slope <= 0.85


def test_er_subcritical_max_small():
    sizes = []
    for n in (10**4, 10**5, 10**6):
        mx = [run_er(n, 0.5, seed, [0.5]).max_size[0] for seed in range(3)]
        sizes.append(np.mean(mx))
    slope = np.polyfit(np.log([1e4, 1e5, 1e6]), np.log(sizes), 1)[0]
    assert slope < 0.25


def test_er_s2_matches_its_ode():
    traj = run_er(10**6, 0.5, 3, np.linspace(0.1, 0.5, 5))
    predicted = 1.0 / (1.0 - traj.t)
    assert np.max(np.abs(traj.s2_bar / predicted - 1.0)) < 0.05


def test_rule_always_first_equals_er():
    grid = np.linspace(0.1, 1.0, 10)
    a = run_er(5000, 1.0, 42, grid)
    b = run_bounded_size(5000, lambda c1, c2, c3, c4: True, 1.0, 42, grid)
    assert trajectories_equal(a, b)
    assert a.tracker.s2 == b.tracker.s2


def test_rule_singleton_pair_equals_bf():
    grid = np.linspace(0.1, 1.0, 10)
    a = run_bf(5000, 1.0, 42, grid)
    b = run_bounded_size(5000, lambda c1, c2, c3, c4: c1 == 1 and c2 == 1,
                         1.0, 42, grid)
    assert trajectories_equal(a, b)
    assert a.tracker.s3 == b.tracker.s3


def test_bounded_size_conserves_vertices():
    rule = lambda c1, c2, c3, c4: (c1 + c2 + c3 + c4) % 2 == 0
    traj = run_bounded_size(2000, rule, 1.2, 9, [0.6, 1.2], cap=2)
    assert int(component_masses(traj.tracker).sum()) == 2000
    assert np.all(traj.n_vertices == 2000)


def test_initial_grid_point_state():
    traj = run_bf(100, 0.5, 0, [0.0, 0.5])
    assert traj.x_bar[0] == 1.0
    assert traj.s2_bar[0] == 1.0
    assert traj.event_count[0] == 0


def test_trajectory_monotonicity(bf_sol):
    grid = np.linspace(0.1, 2.0, 20)
    traj = run_bf(20000, 2.0, 5, grid)
    assert np.all((traj.x_bar >= 0) & (traj.x_bar <= 1))
    assert np.all(np.diff(traj.s2_bar) >= 0)
    assert np.all(np.diff(traj.s3_bar) >= 0)
    assert np.all(np.diff(traj.x_bar) <= 0)


def test_bf_x_bar_tracks_ode(bf_sol):
    n = 10**5
    horizon = 2.0 * bf_sol.t_c
    grid = np.linspace(0.05, horizon, 40)
    traj = run_bf(n, horizon, 11, grid)
    gap = np.max(np.abs(traj.x_bar - bf_sol.x_at(grid)))
    assert gap <= 5 * n ** (-0.4)


def test_doubleton_rate_matches_mean_field():
    # frequency of new-doubleton events over a window against n * a0(x_bar)
    n = 10**5
    grid = [0.5, 0.55, 0.6]
    observed = 0.0
    predicted = 0.0
    for seed in range(3):
        traj = run_bf(n, 0.6, seed, grid)
        observed += traj.doubleton_count[-1] - traj.doubleton_count[0]
        x = traj.x_bar
        a0 = 0.5 * (x**2 + (1 - x**2) * x**2)
        predicted += n * 0.1 * (a0[0] + 4 * a0[1] + a0[2]) / 6  # Simpson
    assert abs(observed / predicted - 1.0) < 0.05


def test_rgiva_immigration_only_all_doubletons():
    traj = run_rgiva(500, constant_rates(1.0, 0.0, 0.0), 1.0, 5, [1.0])
    masses = component_masses(traj.tracker)
    assert masses.size > 0
    assert np.all(masses == 2)


def test_rgiva_immigration_count_poisson():
    rates = constant_rates(1.0, 0.0, 0.0)
    counts = [run_rgiva(200, rates, 0.7, seed, [0.7]).doubleton_count[-1]
              for seed in range(30)]
    se = np.sqrt(140.0 / 30)
    assert abs(np.mean(counts) - 140.0) < 3 * se


def test_rgiva_subcritical_max_polylog(bf_sol):
    rates = bf_rate_functions(bf_sol)
    for n in (10**4, 10**5):
        traj = run_rgiva(n, rates, 1.0, 2, [1.0])
        assert traj.max_size[-1] <= np.log(n) ** 4


def test_rgiva_vertex_count_nondecreasing(bf_sol):
    traj = run_rgiva(2000, bf_rate_functions(bf_sol), 1.0, 8,
                     np.linspace(0.1, 1.0, 10))
    assert np.all(np.diff(traj.n_vertices) >= 0)
    assert traj.model == "rgiva"


def test_snapshot_stats_left_neighbor():
    traj = run_bf(1000, 1.0, 3, [0.25, 0.5, 0.75])
    row = snapshot_stats(traj, 0.6)
    assert row.t == 0.5
    assert row.s2_bar == traj.s2_bar[1]
    assert snapshot_stats(traj, 0.25).t == 0.25
    assert snapshot_stats(traj, 5.0).t == 0.75  # past the end: terminal row
    with pytest.raises(ValueError):
        snapshot_stats(traj, 0.1)


def test_fixed_seed_reproducible(bf_sol):
    grid = np.linspace(0.2, 1.0, 5)
    a = run_bf(3000, 1.0, 77, grid)
    b = run_bf(3000, 1.0, 77, grid)
    assert trajectories_equal(a, b)
    rates = bf_rate_functions(bf_sol)
    c = run_rgiva(3000, rates, 1.0, 77, grid)
    d = run_rgiva(3000, rates, 1.0, 77, grid)
    assert trajectories_equal(c, d)


def test_csv_and_json_round_trip(tmp_path):
    traj = run_bf(500, 1.0, 1, np.linspace(0.2, 1.0, 5))
    csv_path = tmp_path / "traj.csv"
    write_csv(traj, csv_path)
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,x_bar,s2_bar,s3_bar,max_size,n_vertices"
    assert len(lines) == 6
    json_path = tmp_path / "traj.json"
    write_json(traj, json_path)
    back = read_json(json_path)
    assert trajectories_equal(traj, back)
    assert back.seed == traj.seed and back.model == traj.model
    assert back.tracker is None


def test_argument_validation():
    with pytest.raises(ValueError):
        run_bf(1, 1.0, 0, [1.0])
    with pytest.raises(ValueError):
        run_bf(100, default_horizon() + 0.5, 0, [1.0])
    with pytest.raises(ValueError):
        run_bf(100, 1.0, 0, [0.5, 0.5])  # not strictly increasing
    with pytest.raises(ValueError):
        run_bf(100, 1.0, 0, [0.5, 1.5])  # beyond t_end
    with pytest.raises(ValueError):
        run_bounded_size(100, lambda *a: True, 1.0, 0, [1.0], cap=0)
    with pytest.raises(ValueError):
        constant_rates(1.2, 0.0, 0.0)
    with pytest.raises(ValueError):
        run_rgiva(100, constant_rates(1.0, 0.0, 0.0, horizon=0.5), 1.0, 0,
                  [1.0])


def test_rgiva_rejects_invalid_rate_values():
    bad = RateFunctions(a=lambda t: 1.5, b=lambda t: 0.0, c=lambda t: 0.0,
                        horizon=10.0)
    with pytest.raises(ValueError):
        run_rgiva(50, bad, 1.0, 0, [1.0])
