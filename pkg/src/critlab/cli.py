"""Command-line entry points.

Every subcommand prints to stdout unless ``--out`` names a file; reports
honor ``--format json|csv``. List-valued flags (``--n``, ``--lambda``,
``--t``) take comma-separated values.
"""

import argparse
import contextlib
import csv
import json
import sys

import numpy as np

from critlab.experiments import (
    BudgetError,
    exp_coupling_sandwich,
    exp_critical_window,
    exp_prop_main,
    exp_rho_curve,
    exp_subcritical_max,
)
from critlab.irg import sample_irg
from critlab.limits import sample_excursions, simulate_coalescent
from critlab.ode import solve_system
from critlab.process import (
    bf_rate_functions,
    run_bf,
    run_er,
    run_rgiva,
    write_csv,
    write_json,
)


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_report(report, args):
    if args.format == "json":
        text = report.to_json()
    else:
        text = report.to_csv()
    with _output(args.out) as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")
    return 0 if report.passed else 1


def _cmd_ode(args):
    sol = solve_system()
    with _output(args.out) as fh:
        if args.format == "json":
            json.dump({"t_c": sol.t_c, "alpha": sol.alpha, "beta": sol.beta},
                      fh, indent=2)
            fh.write("\n")
        else:
            w = csv.writer(fh)
            w.writerow(["t", "x", "s2", "s3"])
            for i in range(sol.t.size):
                w.writerow([repr(float(sol.t[i])), repr(float(sol.x[i])),
                            repr(float(sol.s2[i])), repr(float(sol.s3[i]))])
    return 0


def _cmd_rho(args):
    report = exp_rho_curve(args.t, args.m, seed=args.seed,
                           budget_seconds=args.budget_seconds)
    if args.format == "csv":
        with _output(args.out) as fh:
            w = csv.writer(fh)
            w.writerow(["t", "rho_hat", "std_err"])
            for cell in report.cells:
                w.writerow([repr(cell["t"]), repr(cell["rho_hat"]),
                            repr(cell["std_err"])])
        return 0 if report.passed else 1
    return _emit_report(report, args)


def _cmd_simulate(args):
    n = args.n[0]
    t_end = args.t[0]
    grid = np.linspace(0.0, t_end, args.points + 1)[1:]
    if args.model == "bf":
        traj = run_bf(n, t_end, args.seed, grid)
    elif args.model == "er":
        traj = run_er(n, t_end, args.seed, grid)
    else:
        rates = bf_rate_functions(solve_system())
        traj = run_rgiva(n, rates, t_end, args.seed, grid)
    with _output(args.out) as fh:
        if args.format == "json":
            write_json(traj, fh)
            fh.write("\n")
        else:
            write_csv(traj, fh)
    return 0


def _cmd_coalescent(args):
    x0 = np.asarray(args.x0 if args.x0 else [1.0] * args.n[0])
    masses = simulate_coalescent(x0, args.t[0], seed=args.seed)
    with _output(args.out) as fh:
        json.dump(np.asarray(masses).tolist(), fh)
        fh.write("\n")
    return 0


def _cmd_excursions(args):
    exc = sample_excursions(args.lam[0], step=args.step, seed=args.seed)
    with _output(args.out) as fh:
        json.dump(exc.lengths.tolist(), fh)
        fh.write("\n")
    return 0


def _cmd_irg_sample(args):
    rates = bf_rate_functions(solve_system())
    samples = [sample_irg(args.n[0], rates, args.t[0],
                          seed=args.seed + r).tolist()
               for r in range(args.reps)]
    with _output(args.out) as fh:
        json.dump(samples[0] if args.reps == 1 else samples, fh)
        fh.write("\n")
    return 0


def _cmd_window(args):
    report = exp_critical_window(args.n, args.lam, reps=args.reps,
                                 seed=args.seed, step=args.step,
                                 ks_blocks=args.blocks,
                                 budget_seconds=args.budget_seconds)
    return _emit_report(report, args)


def _cmd_prop_main(args):
    report = exp_prop_main(args.n, args.gamma, reps=args.reps, seed=args.seed,
                           budget_seconds=args.budget_seconds)
    return _emit_report(report, args)


def _cmd_subcritical_max(args):
    report = exp_subcritical_max(args.n, args.gamma, reps=args.reps,
                                 seed=args.seed, model=args.model,
                                 budget_seconds=args.budget_seconds)
    return _emit_report(report, args)


def _cmd_sandwich(args):
    report = exp_coupling_sandwich(args.n[0], args.delta, args.t[0],
                                   reps=args.reps, seed=args.seed,
                                   budget_seconds=args.budget_seconds)
    return _emit_report(report, args)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="critlab",
        description="Simulation lab for bounded-size random graph processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, **defaults):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--n", type=_int_list,
                       default=defaults.get("n", [10_000]),
                       help="scale(s), comma separated")
        p.add_argument("--lambda", dest="lam", type=_float_list,
                       default=defaults.get("lam", [0.0]),
                       help="window location(s), comma separated")
        p.add_argument("--t", type=_float_list,
                       default=defaults.get("t", [0.8]),
                       help="time point(s), comma separated")
        p.add_argument("--gamma", type=float,
                       default=defaults.get("gamma", 0.18))
        p.add_argument("--reps", type=int, default=defaults.get("reps", 20))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"),
                       default=defaults.get("format", "json"))
        p.add_argument("--budget-seconds", type=float, default=None)
        return p

    add("ode", _cmd_ode, "critical constants and the solved flow")

    p = add("rho", _cmd_rho, "operator-norm curve on a time grid",
            t=[0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3],
            format="csv")
    p.add_argument("--m", type=int, default=500, help="clusters per estimate")

    p = add("simulate", _cmd_simulate, "one trajectory of a graph process",
            t=[1.0], format="csv")
    p.add_argument("--model", choices=("bf", "er", "rgiva"), default="bf")
    p.add_argument("--points", type=int, default=50, help="sample grid size")

    p = add("coalescent", _cmd_coalescent, "merge unit blocks for a duration",
            n=[20], t=[0.5])
    p.add_argument("--x0", type=_float_list, default=None,
                   help="initial masses, comma separated (overrides --n)")

    p = add("excursions", _cmd_excursions, "excursion lengths above the "
            "running minimum of a drifted path")
    p.add_argument("--step", type=float, default=1e-3)

    p = add("window", _cmd_window, "rescaled largest component vs excursions",
            n=[10_000, 100_000], reps=60)
    p.add_argument("--step", type=float, default=5e-4,
                   help="excursion sampler step")
    p.add_argument("--blocks", type=int, default=3,
                   help="independent KS blocks per cell")

    add("prop-main", _cmd_prop_main, "near-critical moment ratios",
        n=[10_000, 100_000])
    p = add("subcritical-max", _cmd_subcritical_max,
            "largest component against its subcritical envelope",
            n=[10_000, 100_000], reps=10)
    p.add_argument("--model", choices=("bf", "er"), default="bf")

    p = add("sandwich", _cmd_sandwich,
            "bracket the pair process between attachment models",
            n=[20_000], t=[0.9])
    p.add_argument("--delta", type=float, default=0.05)

    p = add("irg-sample", _cmd_irg_sample, "component volumes of the "
            "sampled cluster graph", reps=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
