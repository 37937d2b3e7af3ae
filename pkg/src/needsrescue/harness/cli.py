"""Command-line entry point: ``needsrescue <command> ...``.

Commands
--------
simulate        run seeded trials of scenario files (or shipped names, or ``all``)
analytic        closed-form report for the teams in a mission file
optimize        best team for a budget under a mission file
validate        Monte Carlo check of the Poisson expectations
dump-defaults   built-in profiles and the shipped scenario files
dump-tree       the needs behaviour tree as indented text
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import yaml

from .. import defaults
from ..analytic import analyze, compare
from ..core import check_dominance, default_profiles
from ..needs_bt import render_tree
from ..optimizer import NoFeasibleComposition, optimize_team
from ..sim.behaviors import default_tree
from .experiment import ExperimentError, run_experiment
from .mission import load_mission, parse_team, profiles_as_dict
from .report import emit, render
from .scenario import SHIPPED, ScenarioError, load_scenario, shipped_path
from .validation import validate_analytic

log = logging.getLogger("needsrescue")


def _scenarios(items):
    paths = []
    for item in items:
        if item == "all":
            paths.extend(shipped_path(n) for n in SHIPPED)
        elif not Path(item).exists() and item in SHIPPED:
            paths.append(shipped_path(item))
        else:
            paths.append(Path(item))
    return [load_scenario(p) for p in paths]


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args):
    scenarios = _scenarios(args.scenarios)
    stats = run_experiment(scenarios, args.trials, args.seed, workers=args.workers)
    out = _outdir(args.out)
    emit(stats, "csv", out / "trials.csv", kind="trials")
    emit(stats, "csv", out / "aggregate.csv")
    if args.json:
        emit(stats, "json", out / "trials.json", kind="trials")
        emit(stats, "json", out / "aggregate.json")
    sys.stdout.write(render(stats, "csv"))
    return 0


def _teams(mf, specs):
    teams = dict(mf.teams)
    for spec in specs or []:
        teams[spec] = parse_team(spec)
    return teams


def _lookup(reports, key):
    if key in reports:
        return key
    comp = parse_team(key)
    for label, rep in reports.items():
        if rep.composition == comp:
            return label
    raise ValueError(f"team {key!r} is not among the analysed teams")


def cmd_analytic(args):
    mf = load_mission(args.mission)
    teams = _teams(mf, args.team)
    if args.compare:
        for key in args.compare:
            if key not in teams:
                teams[key] = parse_team(key)
    if not teams:
        raise ValueError("no teams: add a 'teams' block to the mission file or pass --team x,y,z")
    reports = {label: analyze(comp, mf.mission, mf.profiles) for label, comp in teams.items()}
    out = _outdir(args.out)
    emit(reports, "csv", out / "analytic.csv")
    emit(reports, "json", out / "analytic.json")
    sys.stdout.write(render(reports, "csv"))
    if args.compare:
        a, b = (_lookup(reports, k) for k in args.compare)
        comparisons = [compare(reports[a], reports[b], a, b)]
    else:
        labels = list(reports)
        comparisons = [compare(reports[a], reports[b], a, b)
                       for a in labels for b in labels if a != b and reports[b].expected_utility > 0]
    if comparisons:
        emit(comparisons, "csv", out / "comparison.csv")
        emit(comparisons, "json", out / "comparison.json")
        sys.stdout.write(render(comparisons, "csv"))
    return 0


def cmd_optimize(args):
    mf = load_mission(args.mission)
    result = optimize_team(args.budget, mf.mission, mf.profiles, exact=not args.at_most)
    out = _outdir(args.out)
    emit(result, "json", out / "optimization.json")
    emit(result, "csv", out / "ranking.csv")
    print(f"best {result.best} utility={result.report.expected_utility!r} "
          f"energy={result.report.expected_energy!r} "
          f"feasible={result.feasible_count}/{result.evaluated_count}")
    return 0


def cmd_validate(args):
    lambdas = [float(v) for v in args.lambdas.split(",") if v.strip()]
    report = validate_analytic(lambdas, args.samples, args.seed)
    text = render(report, "csv")
    if args.out:
        emit(report, "csv", args.out)
    sys.stdout.write(text)
    return 0


def cmd_dump_defaults(args):
    profiles = default_profiles()
    doc = {
        "profiles": profiles_as_dict(profiles),
        "dominance": {"factor": defaults.DOMINANCE_FACTOR, "approx_ratio": list(defaults.APPROX_RATIO)},
    }
    sys.stdout.write(yaml.safe_dump(doc, sort_keys=False))
    for v in check_dominance(profiles):
        sys.stdout.write(f"# dominance violation: {v.relation}: {v.detail}\n")
    for name in SHIPPED:
        sys.stdout.write(f"--- # {name}.yaml\n")
        sys.stdout.write(shipped_path(name).read_text())
    return 0


def cmd_dump_tree(args):
    print(render_tree(default_tree()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="needsrescue", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run seeded trials of one or more scenarios")
    s.add_argument("scenarios", nargs="+", help="scenario files, shipped names, or 'all'")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed+i")
    s.add_argument("--workers", type=int, default=1, help="parallel trial threads")
    s.add_argument("--out", default="results", help="output directory")
    s.add_argument("--json", action="store_true", help="also write JSON")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analytic", help="closed-form utility and energy per team")
    a.add_argument("mission", help="mission file (YAML)")
    a.add_argument("--team", action="append", help="extra team as x,y,z (repeatable)")
    a.add_argument("--compare", nargs=2, metavar=("A", "B"), help="team names or x,y,z")
    a.add_argument("--out", default="results")
    a.set_defaults(func=cmd_analytic)

    o = sub.add_parser("optimize", help="best team composition for a robot budget")
    o.add_argument("mission", help="mission file (YAML)")
    o.add_argument("--budget", type=int, required=True)
    o.add_argument("--at-most", action="store_true", help="allow teams smaller than the budget")
    o.add_argument("--out", default="results")
    o.set_defaults(func=cmd_optimize)

    v = sub.add_parser("validate", help="Monte Carlo check of E[1/(T+1)] and E[T]")
    v.add_argument("--lambdas", default="0.5,1,2,5")
    v.add_argument("--samples", type=int, default=1_000_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="CSV path (stdout only if omitted)")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("dump-defaults", help="print built-in profiles and shipped scenarios")
    d.set_defaults(func=cmd_dump_defaults)
    t = sub.add_parser("dump-tree", help="print the needs behaviour tree")
    t.set_defaults(func=cmd_dump_tree)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, ExperimentError, NoFeasibleComposition, ValueError, OSError) as exc:
        print(f"needsrescue {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
