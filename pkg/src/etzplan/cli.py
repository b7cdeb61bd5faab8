"""Command-line driver for batch use.

Subcommands: ``etz`` (variance decomposition table), ``assess`` (transition
decision report for a scenario file), ``simulate`` (replicated profile CSV,
optionally with a rendered figure), ``designate`` (primary-endpoint
designation). Exit codes: 0 success (for ``assess``: transition recommended),
1 assessment completed but transition not recommended, 2 any error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

from .cbq import complete_discount_plan, transition_assessment
from .confset import EndpointEstimate, IntervalKind, PartitionConfig, designate_endpoint
from .errors import EtzError
from .etz import EtzComponents, VarianceTriple, decompose_etz
from .ingest import parse_scenario_record, study_to_variance_triple
from .simprofile import SimConfig, simulate_profile_rows, study_fixed_effects

__all__ = ["main", "build_parser"]

CSV_COLUMNS = ("rep", "week", "arm", "mean_y", "mean_change")


def _estimate(text: str) -> EndpointEstimate:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected ESTIMATE,SE (two comma-separated numbers), got {text!r}"
        )
    try:
        theta_hat, sigma = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"non-numeric estimate pair {text!r}") from exc
    try:
        return EndpointEstimate(theta_hat=theta_hat, sigma=sigma)
    except EtzError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etzplan",
        description="Variance decomposition and phase-transition decision tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_etz = sub.add_parser("etz", help="decompose a variance triple into components")
    p_etz.add_argument("--baseline-var", type=float, required=True)
    p_etz.add_argument("--milestone-var", type=float, required=True)
    p_etz.add_argument("--change-var", type=float, required=True)
    p_etz.set_defaults(func=_cmd_etz)

    p_assess = sub.add_parser("assess", help="run the transition assessment for a scenario")
    p_assess.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")
    p_assess.add_argument("--n3-rx", type=int, help="override confirmatory rx arm size")
    p_assess.add_argument("--n3-c", type=int, help="override confirmatory control arm size")
    p_assess.add_argument("--gamma", type=float, help="override success confidence")
    p_assess.add_argument("--d2", type=float, help="override feeder discount")
    p_assess.add_argument(
        "--plot", type=Path, help="also render the predictive histogram to this file"
    )
    p_assess.set_defaults(func=_cmd_assess)

    p_sim = sub.add_parser("simulate", help="simulate replicated studies, write profile CSV")
    p_sim.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")
    p_sim.add_argument("--reps", type=int, required=True, help="number of replications")
    p_sim.add_argument("--seed", type=int, required=True, help="random seed")
    p_sim.add_argument("--sd-e", type=float, help="override SD of measurement error")
    p_sim.add_argument("--sd-traj", type=float, help="override SD of trajectory change")
    p_sim.add_argument("--sd-z", type=float, help="override SD of stable traits")
    p_sim.add_argument("--out", type=Path, required=True, help="output CSV path")
    p_sim.add_argument("--workers", type=int, default=1, help="worker threads")
    p_sim.add_argument(
        "--plot", action="store_true", help="also render a profile figure next to the CSV"
    )
    p_sim.set_defaults(func=_cmd_simulate)

    p_designate = sub.add_parser("designate", help="designate the confirmatory endpoint")
    p_designate.add_argument("--e1", type=_estimate, required=True, metavar="EST,SE")
    p_designate.add_argument("--e2", type=_estimate, required=True, metavar="EST,SE")
    p_designate.add_argument("--rho", type=float, default=0.0)
    p_designate.add_argument("--alpha", type=float, required=True)
    p_designate.add_argument("--cmd", type=float, required=True, dest="c_md")
    p_designate.set_defaults(func=_cmd_designate)

    return parser


def _cmd_etz(args: argparse.Namespace) -> int:
    triple = VarianceTriple(
        var_baseline=args.baseline_var,
        var_milestone=args.milestone_var,
        var_change=args.change_var,
    )
    c = decompose_etz(triple)
    print(f"{'component':<10} {'Var(Z)':>10} {'Var(E)':>10} {'Var(Traj)':>10}")
    print(f"{'variance':<10} {c.var_z:>10.3f} {c.var_e:>10.3f} {c.var_traj:>10.3f}")
    print(
        f"{'sd':<10} {math.sqrt(c.var_z):>10.3f} {math.sqrt(c.var_e):>10.3f} "
        f"{math.sqrt(c.var_traj):>10.3f}"
    )
    return 0


def _load_scenario(path: Path):
    record = parse_scenario_record(path.read_text(encoding="utf-8"))
    etz = record.etz_override
    if etz is None:
        etz = decompose_etz(study_to_variance_triple(record.study))
    return record, etz


def _cmd_assess(args: argparse.Namespace) -> int:
    record, etz = _load_scenario(args.scenario)
    plan, design = record.plan, record.design
    if args.gamma is not None or args.d2 is not None:
        gamma = args.gamma if args.gamma is not None else plan.gamma
        d2 = args.d2 if args.d2 is not None else plan.d_phase2
        plan = complete_discount_plan(gamma, d_phase2=d2)
    if args.n3_rx is not None or args.n3_c is not None:
        design = replace(
            design,
            n_rx=args.n3_rx if args.n3_rx is not None else design.n_rx,
            n_c=args.n3_c if args.n3_c is not None else design.n_c,
        )

    report = transition_assessment(record.study, etz, plan, design)

    L = report.confident_efficacy
    print(f"scenario            {record.id}    outcome {record.study.outcome_name}")
    print(
        f"discounts           gamma {plan.gamma:.3f} = "
        f"(d2 {plan.d_phase2:.3f} + 0.5) x (d3 {plan.d_phase3:.3f} + 0.5)"
    )
    print(
        f"confident efficacy  {L.value:.3f}  "
        f"(level {L.level:.3f}, df {L.df}, pooled SE {L.se_pooled:.3f})"
    )
    print(
        f"confirmatory design n {design.n_rx} + {design.n_c}, "
        f"SD(change) {design.sigma_pooled:.3f}, seed {design.seed}, reps {design.reps}"
    )
    print(f"cbq (closed form)   {report.cbq:.3f}")
    print(f"cbq (monte carlo)   {report.cbq_monte_carlo:.3f}")
    verdict = "recommended" if report.transition_recommended else "not recommended"
    print(f"transition          {verdict}")

    if args.plot is not None:
        from .plots import render_cbq_histogram

        render_cbq_histogram(report.quantile_histogram, report.cbq_monte_carlo, args.plot)
        print(f"histogram figure    {args.plot}")

    return 0 if report.transition_recommended else 1


def _cmd_simulate(args: argparse.Namespace) -> int:
    record, etz = _load_scenario(args.scenario)
    study = record.study
    etz = EtzComponents(
        var_z=args.sd_z**2 if args.sd_z is not None else etz.var_z,
        var_e=args.sd_e**2 if args.sd_e is not None else etz.var_e,
        var_traj=args.sd_traj**2 if args.sd_traj is not None else etz.var_traj,
    )
    fx = study_fixed_effects(study)
    cfg = SimConfig(
        visit_weeks=study.visit_weeks,
        n_rx=study.rx.n_baseline,
        n_c=study.control.n_baseline,
        etz=etz,
        seed=args.seed,
        n_reps=args.reps,
    )
    tables = simulate_profile_rows(fx, cfg, workers=args.workers)

    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rep_index, rows in enumerate(tables):
            for row in rows:
                writer.writerow([rep_index, row.week, row.arm, row.mean_y, row.mean_change])

    print(f"wrote {args.reps * len(cfg.visit_weeks) * 2} rows to {args.out}")

    if args.plot:
        from .plots import render_profile_plot

        figure_path = args.out.with_suffix(".png")
        render_profile_plot(tables, figure_path)
        print(f"profile figure {figure_path}")

    return 0


def _cmd_designate(args: argparse.Namespace) -> int:
    cfg = PartitionConfig(alpha=args.alpha, c_md=args.c_md, rho=args.rho)
    decision = designate_endpoint(args.e1, args.e2, cfg)
    print(f"outcome             {decision.outcome.value}")
    interval = decision.diff_interval
    if interval.kind is IntervalKind.WholeLine:
        print("difference interval whole line (no directional claim)")
    else:
        relation = ">=" if interval.lower > 0 else "<="
        print(f"difference interval efficacy difference {relation} {interval.lower:.3f}")
    if decision.avg_lower is not None:
        print(f"combined lower bound {decision.avg_lower:.3f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except EtzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
