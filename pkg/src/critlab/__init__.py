"""critlab: simulation lab for bounded-size random graph processes."""

from critlab.irg import (
    ClusterSample,
    KernelEstimate,
    estimate_rho,
    first_component_volume,
    immigration_mass,
    kernel_eval,
    rooted_component_volume,
    sample_bp_volume,
    sample_cluster,
    sample_irg,
)
from critlab.limits import (
    ExcursionSet,
    first_merge_time,
    order_mass,
    sample_excursions,
    simulate_coalescent,
)
from critlab.process import (
    RateFunctions,
    Stats,
    Trajectory,
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
from critlab.ode import (
    OdeSolution,
    StepControl,
    compute_alpha_beta,
    critical_constants,
    find_tc,
    rate_functions_at,
    solve_system,
)
from critlab.tracker import (
    ALREADY_JOINED,
    MERGED,
    TrackerState,
    add_vertex,
    component_masses,
    empty_tracker,
    find_root,
    is_singleton,
    merge,
    new_tracker,
)

__all__ = [
    "ALREADY_JOINED",
    "MERGED",
    "ClusterSample",
    "ExcursionSet",
    "KernelEstimate",
    "OdeSolution",
    "RateFunctions",
    "Stats",
    "StepControl",
    "TrackerState",
    "Trajectory",
    "add_vertex",
    "bf_rate_functions",
    "component_masses",
    "compute_alpha_beta",
    "constant_rates",
    "critical_constants",
    "default_horizon",
    "empty_tracker",
    "estimate_rho",
    "find_root",
    "find_tc",
    "first_component_volume",
    "first_merge_time",
    "immigration_mass",
    "is_singleton",
    "kernel_eval",
    "merge",
    "new_tracker",
    "order_mass",
    "rate_functions_at",
    "read_json",
    "rooted_component_volume",
    "run_bf",
    "run_bounded_size",
    "run_er",
    "run_rgiva",
    "sample_bp_volume",
    "sample_cluster",
    "sample_excursions",
    "sample_irg",
    "simulate_coalescent",
    "snapshot_stats",
    "solve_system",
    "write_csv",
    "write_json",
]
