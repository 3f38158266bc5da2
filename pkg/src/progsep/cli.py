"""Command-line interface.

    progsep simulate  [--censor F] [--seed N] [--out DIR]
    progsep km        COHORT [--at T] [--out DIR] [--format csv|json|svg]
    progsep compare   COHORT [--level L]
    progsep validate  [COHORT] --t0 T --rates R1,R2,... [--sens S --spec P] [--format csv|json]
    progsep diffcurve --sens S --spec P [--sens S --spec P ...] [--step H] [--out DIR]
    progsep table5    FILE [--format csv|json]

Exit status is 0 on success and 2 on input or domain errors; errors go to
stderr only.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from .cohort import CohortError, Group, HorizonSpec, format_cohort, read_cohort, write_cohort
from .diagnostics import UndefinedValueError, difference_curve, uniform_grid
from .report import (
    difference_curves_csv,
    difference_table,
    difference_table_csv,
    difference_table_json,
    parse_table5,
    validate_accuracy,
    validate_cohort,
)
from .simulation import DEFAULT_RATE_HIGH, DEFAULT_RATE_LOW, SimulationConfig, simulate_cohort
from .survival import SurvivalError, group_curves, hazard_ratio, km_estimate, log_rank, survival_at

EXIT_ERROR = 2


class CommandError(Exception):
    pass


def _prob(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= x <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text!r}")
    return x


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _rates(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list: {text!r}") from None


def _seed(text: str) -> int:
    try:
        n = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {text!r}")
    return n


def _load(path: str):
    p = Path(path)
    try:
        return read_cohort(p)
    except CohortError as exc:
        raise CommandError(f"{p}: {exc}") from exc
    except OSError as exc:
        raise CommandError(f"{p}: {exc.strerror or exc}") from exc


def _outdir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    config = SimulationConfig(
        n_low=args.n_low,
        n_high=args.n_high,
        rate_low=args.rate_low,
        rate_high=args.rate_high,
        censor_fraction=args.censor,
        seed=seed,
    )
    cohort = simulate_cohort(config)
    if args.out:
        path = _outdir(args.out) / "cohort.csv"
        write_cohort(cohort, path)
        print(f"seed: {seed}")
        print(f"wrote {len(cohort)} records to {path}")
    else:
        sys.stdout.write(format_cohort(cohort))
        print(f"seed: {seed}", file=sys.stderr)
    return 0


def cmd_km(args) -> int:
    cohort = _load(args.cohort)
    curves = group_curves(cohort)
    out = _outdir(args.out)
    stem = Path(args.cohort).stem
    if args.format in ("csv", "json"):
        for group, curve in curves.items():
            path = out / f"{stem}_km_{group.value}.{args.format}"
            path.write_text(curve.to_csv() if args.format == "csv" else curve.to_json())
    from .plotting import plot_km

    t_end = max(r.time for r in cohort.records)
    plot_km(curves, out / f"{stem}_km.svg", title=stem, t_end=t_end)
    if args.at is not None:
        t0 = HorizonSpec(args.at)
        pooled = survival_at(km_estimate(cohort.records), t0)
        print("t0,pooled,low,high")
        print(
            f"{args.at!r},{pooled!r},{survival_at(curves[Group.LOW], t0)!r},"
            f"{survival_at(curves[Group.HIGH], t0)!r}"
        )
    return 0


def cmd_compare(args) -> int:
    cohort = _load(args.cohort)
    lr = log_rank(cohort)
    hr = hazard_ratio(cohort, args.level)
    print(json.dumps({"log_rank": lr.to_dict(), "hazard_ratio": hr.to_dict()}, indent=2))
    return 0


def cmd_validate(args) -> int:
    given = args.sens is not None or args.spec is not None
    if given and (args.sens is None or args.spec is None):
        raise CommandError("--sens and --spec must be given together")
    if given == (args.cohort is not None):
        raise CommandError("give either a cohort file or --sens/--spec, not both")
    if given:
        report = validate_accuracy(args.sens, args.spec, args.rates)
    else:
        if args.t0 is None:
            raise CommandError("--t0 is required with a cohort file")
        report = validate_cohort(_load(args.cohort), args.t0, args.rates)
        if report.clamped:
            print("warning: time-dependent estimate clamped to [0, 1]", file=sys.stderr)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        sys.stdout.write(report.to_csv())
    for row in report.errors:
        print(f"error: rate {row.rate!r}: {row.error}", file=sys.stderr)
    return EXIT_ERROR if report.errors else 0


def cmd_diffcurve(args) -> int:
    sens, spec = args.sens or [], args.spec or []
    if not sens or len(sens) != len(spec):
        raise CommandError("give one or more --sens/--spec pairs")
    grid = uniform_grid(args.step)
    curves = [((se, sp), difference_curve(se, sp, grid)) for se, sp in zip(sens, spec)]
    out = _outdir(args.out)
    (out / "diffcurve.csv").write_text(difference_curves_csv(curves))
    if args.format != "csv":
        from .plotting import plot_difference_curves

        plot_difference_curves(curves, out / "diffcurve.svg")
    for (se, sp), points in curves:
        rate, best = max(points, key=lambda p: p[1])
        print(f"sens={se!r} spec={sp!r}: max difference {best:.4f} at rate {rate:g}")
    return 0


def cmd_table5(args) -> int:
    path = Path(args.file)
    try:
        rows = parse_table5(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CommandError(f"{path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise CommandError(f"{path}: {exc}") from exc
    table = difference_table(rows)
    sys.stdout.write(difference_table_json(table) + "\n" if args.format == "json" else difference_table_csv(table))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="progsep",
        description="Validate high-risk/low-risk prognostic subgroups on survival data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a two-group exponential cohort")
    p.add_argument("--n-low", type=int, default=400)
    p.add_argument("--n-high", type=int, default=400)
    p.add_argument("--rate-low", type=_positive, default=DEFAULT_RATE_LOW)
    p.add_argument("--rate-high", type=_positive, default=DEFAULT_RATE_HIGH)
    p.add_argument("--censor", type=_prob, default=0.0, help="fraction censored per group")
    p.add_argument("--seed", type=_seed, default=None, help="u64 seed (random if omitted)")
    p.add_argument("--out", help="directory for cohort.csv (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("km", help="Kaplan-Meier curves per risk group")
    p.add_argument("cohort")
    p.add_argument("--at", type=_positive, help="print survival at this time")
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.set_defaults(func=cmd_km)

    p = sub.add_parser("compare", help="log-rank test and hazard ratio")
    p.add_argument("cohort")
    p.add_argument("--level", type=_prob, default=0.95)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("validate", help="adjusted subgroup survival across population rates")
    p.add_argument("cohort", nargs="?")
    p.add_argument("--t0", type=_positive)
    p.add_argument("--rates", type=_rates, required=True)
    p.add_argument("--sens", type=_prob)
    p.add_argument("--spec", type=_prob)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("diffcurve", help="S_low - S_high as a function of the population rate")
    p.add_argument("--sens", type=_prob, action="append")
    p.add_argument("--spec", type=_prob, action="append")
    p.add_argument("--step", type=_positive, default=0.001)
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=["csv", "svg"], default="svg")
    p.set_defaults(func=cmd_diffcurve)

    p = sub.add_parser("table5", help="adjusted vs naive survival differences")
    p.add_argument("file", help="CSV with header sens,spec,pop_rate,val_rate")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_table5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CommandError, CohortError, SurvivalError, UndefinedValueError, ValueError) as exc:
        print(f"progsep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
