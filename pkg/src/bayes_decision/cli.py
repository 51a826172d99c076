"""Command-line front end.

Exit codes: 0 success, 2 parse or schema error, 3 domain error,
4 no fair probability, 5 scenario failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from .criterion import BoundsConfig, analyze
from .exceptions import DimensionError, NoFairProbabilityError, NormalizationError, UtilityDomainError
from .fairness import fair_probability, fairness_curve
from .problemfile import ProblemFileError, load_problem
from .report import (
    build_report,
    dump_machine,
    fairness_report,
    format_human,
    scenario_report,
)
from .scenarios import SCENARIOS, ellsberg_outcomes, list_scenarios, run_scenario
from .utility import UtilityModel, calibrate_weber, pushforward, utility_curve

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_NO_ROOT, EXIT_SCENARIO = 0, 2, 3, 4, 5
OUTDIR_ENV = "BAYES_DECISION_OUTDIR"


def _error(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _emit(text: str, output: str | None, default_name: str | None = None) -> None:
    """Write to ``output``, to the env output directory, or to stdout.

    Relative output paths are resolved against ``$BAYES_DECISION_OUTDIR``
    when it is set.
    """
    outdir = os.environ.get(OUTDIR_ENV)
    if output is None and outdir and default_name:
        output = default_name
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    path = Path(output)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--linear", action="store_true", help="linear utility (default)")
    g.add_argument("--income", action="store_true", help="Bernoulli utility of income")
    g.add_argument("--debt", action="store_true", help="Bernoulli utility of debt")
    p.add_argument("--q", type=float, help="Weber constant (b for debt)")
    p.add_argument("--jnd", type=float, help="calibrate q so one JND at the reference is 1 utile")
    p.add_argument("--reference", "--wealth", type=float, dest="reference", help="initial wealth or debt")
    p.add_argument("--gamma", type=float, default=1.0, help="smallest significant amount")


def _model_from_args(args) -> UtilityModel:
    if not (args.income or args.debt):
        return UtilityModel.linear()
    kind = "bernoulli_income" if args.income else "bernoulli_debt"
    if args.reference is None:
        raise ValueError(f"{kind} needs --reference")
    if args.jnd is not None and args.q is not None:
        raise ValueError("give either --q or --jnd, not both")
    q = calibrate_weber(args.reference, args.jnd, kind) if args.jnd is not None else (args.q or 1.0)
    return UtilityModel(kind, q, args.reference, args.gamma)


def _add_criterion_args(p: argparse.ArgumentParser, defaults=True) -> None:
    p.add_argument("--k", type=float, default=1.0 if defaults else None, help="bound width in standard deviations")
    p.add_argument("--caution", type=float, help="lower-bound premium (defaults to k)")
    p.add_argument("--opportunity", type=float, help="upper-bound premium (defaults to k)")
    p.add_argument(
        "--mode",
        choices=("sum_of_bounds", "lower_only", "upper_only", "expectation_only"),
        default="sum_of_bounds" if defaults else None,
    )
    p.add_argument("--no-clip", action="store_true", help="disable clipping to the support")


def _config_from_args(args, base: BoundsConfig | None = None) -> BoundsConfig:
    base = base or BoundsConfig()
    k = args.k if args.k is not None else base.k
    keep = args.k is None
    return BoundsConfig(
        k=k,
        caution=args.caution if args.caution is not None else (base.caution if keep else None),
        opportunity=args.opportunity if args.opportunity is not None else (base.opportunity if keep else None),
        mode=args.mode or base.mode,
        clip_to_support=base.clip_to_support and not args.no_clip,
    )


# -- analyze ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    try:
        problem = load_problem(args.path)
    except OSError as exc:
        return _error(f"{args.path}: {exc.strerror}", EXIT_PARSE)
    except ProblemFileError as exc:
        return _error(f"{args.path}: {exc}", EXIT_PARSE)
    except (NormalizationError, DimensionError, UtilityDomainError) as exc:
        return _error(f"{args.path}: {exc}", EXIT_DOMAIN)
    model = problem.model
    if args.q is not None:
        if not model.is_logarithmic:
            return _error("--q needs a Bernoulli utility in the problem file", EXIT_PARSE)
        model = UtilityModel(model.kind, args.q, model.reference, model.gamma)
    try:
        cfg = _config_from_args(args, problem.config)
        analysis = analyze(list(problem.outcomes), model, cfg, labels=problem.labels)
    except UtilityDomainError as exc:
        return _error(str(exc), EXIT_DOMAIN)
    except ValueError as exc:
        return _error(str(exc), EXIT_PARSE)
    doc = build_report(analysis, model, inputs=problem.source)
    text = dump_machine(doc) if args.format == "machine" else format_human(doc)
    _emit(text, args.output)
    return EXIT_OK


# -- fair ------------------------------------------------------------------


def cmd_fair(args) -> int:
    try:
        model = _model_from_args(args)
        cfg = _config_from_args(args)
        result = fair_probability(args.oc, args.ou, model, cfg)
    except NoFairProbabilityError as exc:
        return _error(f"no fair probability: {exc}", EXIT_NO_ROOT)
    except (UtilityDomainError, ValueError) as exc:
        return _error(str(exc), EXIT_DOMAIN)
    doc = fairness_report(result, model, cfg)
    if args.format == "machine":
        text = dump_machine(doc)
    else:
        unit = " utiles" if model.is_logarithmic else ""
        lines = []
        for r in doc["roots"]:
            lo, hi = r["fair_interval"]
            lines.append(f"p_fair {r['p_fair']:.6g}  branch {r['branch']}  fair interval ({lo:.6g}, {hi:.6g}){unit}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


# -- curve -----------------------------------------------------------------


def _csv(header: str, columns: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# {header}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if v is None else f"{v:.6g}" for v in row])
    return buf.getvalue()


def _ratio_grid(points: int, ratio_min: float) -> np.ndarray:
    grid = np.arange(1, points + 1) / points
    if 0 < ratio_min < grid[0]:
        grid = np.concatenate(([ratio_min], grid))
    return grid


def _fairness_figure(model: UtilityModel, uncertain: float) -> str:
    positive = uncertain > 0
    if model.is_logarithmic:
        return "risk_seeking_1i" if positive else "risk_seeking_1j"
    return "risk_seeking_1e" if positive else "risk_seeking_1h"


def _utility_figure(model: UtilityModel) -> str:
    known = {("bernoulli_income", 300.0): "P1.5.1", ("bernoulli_income", 1e6): "P1.5.2", ("bernoulli_debt", 40000.0): "P1.zq.1"}
    return known.get((model.kind, model.reference), "custom")


def cmd_curve(args) -> int:
    try:
        model = _model_from_args(args)
        cfg = _config_from_args(args)
    except ValueError as exc:
        return _error(str(exc), EXIT_DOMAIN)
    if args.kind == "fairness":
        if args.ou is None:
            return _error("--ou is required for fairness curves", EXIT_PARSE)
        try:
            points = fairness_curve(args.ou, model, cfg, _ratio_grid(args.points or 100, args.ratio_min))
        except (UtilityDomainError, ValueError) as exc:
            return _error(str(exc), EXIT_DOMAIN)
        fig = _fairness_figure(model, args.ou)
        header = f"Figure {fig}: fair probability vs certain/uncertain ratio, O_u={args.ou:g}, utility {model.kind}"
        text = _csv(header, ["ratio", "p_fair"], ((p.ratio, p.p_fair) for p in points))
        name = f"{fig}.csv"
    elif args.kind == "utility":
        if not model.is_logarithmic:
            return _error("utility curves need --income or --debt", EXIT_PARSE)
        try:
            x, u = utility_curve(model, args.lo, args.hi, args.points or 401)
        except UtilityDomainError as exc:
            return _error(str(exc), EXIT_DOMAIN)
        fig = _utility_figure(model)
        header = f"Figure {fig}: utility of increments, {model.kind}, reference {model.reference:g}, q {model.q:.6g}"
        text = _csv(header, ["delta", "utility"], zip(x, u))
        name = f"utility_{fig}.csv"
    else:
        d1, d2 = ellsberg_outcomes()
        if model.is_logarithmic:
            try:
                d1, d2 = pushforward(d1, model), pushforward(d2, model)
            except UtilityDomainError as exc:
                return _error(str(exc), EXIT_DOMAIN)
            fig, col = "P1.3.4", "utility"
        else:
            fig, col = "P1.3.3", "outcome"
        values = np.union1d(d1.values, d2.values)
        header = f"Figure {fig}: Ellsberg bet 1 (known urn) and bet 2 (unknown urn) distributions"
        text = _csv(header, [col, "p_D1", "p_D2"], ((v, d1.pmf(v), d2.pmf(v)) for v in values))
        name = f"ellsberg_{fig}.csv"
    _emit(text, args.output, default_name=name)
    return EXIT_OK


# -- scenario --------------------------------------------------------------


def cmd_scenario(args) -> int:
    if args.list:
        for s in list_scenarios():
            print(f"{s.id:20s} {s.location:40s} {s.description}")
        return EXIT_OK
    if args.all:
        ids = [s.id for s in list_scenarios()]
    elif args.id:
        if args.id not in SCENARIOS:
            return _error(f"unknown scenario {args.id!r}; try --list", EXIT_PARSE)
        ids = [args.id]
    else:
        return _error("give a scenario id, --all or --list", EXIT_PARSE)
    reports = [run_scenario(i) for i in ids]
    if args.format == "machine":
        docs = [scenario_report(r) for r in reports]
        doc = {"scenarios": docs, "pass": all(r.passed for r in reports)}
        text = dump_machine(doc)
    else:
        lines = []
        for r in reports:
            lines.append(f"{r.id:20s} {'PASS' if r.passed else 'FAIL'}")
            if args.verbose or not r.passed:
                for c in r.checks:
                    mark = "ok  " if c.passed else "MISS"
                    tol = "exact" if c.tol is None else f"+-{c.tol:g}"
                    lines.append(f"    {mark} {c.label}: {_show(c.computed)} vs {_show(c.expected)} ({tol}; {c.location})")
        passed = sum(r.passed for r in reports)
        lines.append(f"overall: {'PASS' if passed == len(reports) else 'FAIL'} ({passed}/{len(reports)} scenarios)")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_SCENARIO


def _show(x):
    return f"{x:.6g}" if isinstance(x, float) else str(x)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayes-decision",
        description="Bayesian decision analysis with the sum-of-bounds criterion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a YAML problem file")
    p.add_argument("path")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--q", type=float, help="override the Weber constant")
    _add_criterion_args(p, defaults=False)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fair", help="fair probability of a certain versus uncertain outcome")
    p.add_argument("--oc", type=float, required=True, help="certain outcome")
    p.add_argument("--ou", type=float, required=True, help="uncertain outcome (the alternative is 0)")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--output", "-o")
    _add_model_args(p)
    _add_criterion_args(p)
    p.set_defaults(func=cmd_fair)

    p = sub.add_parser("curve", help="write a figure data series as CSV")
    p.add_argument("--kind", choices=("fairness", "utility", "outcomes"), default="fairness")
    p.add_argument("--ou", type=float, help="uncertain outcome for fairness curves")
    p.add_argument("--points", type=int, help="grid size (100 ratios, 401 increments)")
    p.add_argument("--ratio-min", type=float, default=0.001, help="extra smallest ratio on the fairness grid")
    p.add_argument("--lo", type=float, default=-200.0, help="smallest increment for utility curves")
    p.add_argument("--hi", type=float, default=200.0, help="largest increment for utility curves")
    p.add_argument("--output", "-o", help=f"output file (relative to ${OUTDIR_ENV} if set)")
    _add_model_args(p)
    _add_criterion_args(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("scenario", help="run worked examples against their published values")
    p.add_argument("id", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
