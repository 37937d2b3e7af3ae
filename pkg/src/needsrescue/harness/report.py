"""Flat CSV / JSON emission for every report type.

Floats are written with ``repr`` so they round-trip exactly; undefined
values are empty CSV cells and JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import List, Tuple

from ..analytic import AnalyticReport, ComparisonReport
from ..optimizer import OptimizationResult
from .experiment import AggregateStats, TrialRecord
from .validation import ValidationReport

TRIAL_COLUMNS = ["scenario", "trial", "seed", "rescued_units", "total_energy",
                 "energy_per_unit", "rounds_completed"]
AGGREGATE_COLUMNS = ["scenario", "n_trials", "mean_rescued", "sd_rescued",
                     "mean_energy_per_unit", "sd_energy_per_unit",
                     "min_rescued", "max_rescued", "mean_total_energy", "sd_total_energy",
                     "min_energy_per_unit", "max_energy_per_unit"]
VALIDATION_COLUMNS = ["lambda", "analytic", "empirical", "samples", "rel_error",
                      "mean_t", "mean_rel_error", "var_t"]
ANALYTIC_COLUMNS = ["label", "x", "y", "z", "group_v", "sen_total", "lambda_round",
                    "expected_rounds", "throughput_per_round", "expected_utility",
                    "expected_energy", "energy_per_unit"]
COMPARISON_COLUMNS = ["a", "b", "utility_ratio", "energy_difference",
                      "energy_per_unit_difference", "dominant", "notes"]


def trial_rows(records: List[TrialRecord]) -> List[dict]:
    return [{
        "scenario": r.scenario,
        "trial": r.trial,
        "seed": r.seed,
        "rescued_units": r.metrics.rescued_units,
        "total_energy": r.metrics.total_energy_spent,
        "energy_per_unit": r.metrics.energy_per_unit,
        "rounds_completed": r.metrics.rounds_completed,
    } for r in records]


def aggregate_rows(stats: AggregateStats) -> List[dict]:
    return [{
        "scenario": s.scenario,
        "n_trials": s.n_trials,
        "mean_rescued": s.rescued.mean,
        "sd_rescued": s.rescued.sd,
        "mean_energy_per_unit": s.energy_per_unit.mean,
        "sd_energy_per_unit": s.energy_per_unit.sd,
        "min_rescued": s.rescued.min,
        "max_rescued": s.rescued.max,
        "mean_total_energy": s.energy.mean,
        "sd_total_energy": s.energy.sd,
        "min_energy_per_unit": s.energy_per_unit.min,
        "max_energy_per_unit": s.energy_per_unit.max,
    } for s in stats.rows]


def tabulate(report, kind: str = None) -> Tuple[List[str], List[dict]]:
    """(columns, rows) for any report; ``kind='trials'`` selects the
    trial-level view of an :class:`AggregateStats`."""
    if isinstance(report, AggregateStats):
        if kind == "trials":
            return TRIAL_COLUMNS, trial_rows(report.trials)
        return AGGREGATE_COLUMNS, aggregate_rows(report)
    if isinstance(report, ValidationReport):
        return VALIDATION_COLUMNS, [{
            "lambda": r.lam, "analytic": r.analytic, "empirical": r.empirical,
            "samples": r.samples, "rel_error": r.rel_error, "mean_t": r.mean_t,
            "mean_rel_error": r.mean_rel_error, "var_t": r.var_t,
        } for r in report.rows]
    if isinstance(report, OptimizationResult):
        return ["rank"] + ANALYTIC_COLUMNS, [
            dict(rank=i + 1, label=str(r.composition), **r.as_row())
            for i, r in enumerate(report.ranking)]
    if isinstance(report, list) and report and all(isinstance(r, TrialRecord) for r in report):
        return TRIAL_COLUMNS, trial_rows(report)
    if isinstance(report, dict) and all(isinstance(v, AnalyticReport) for v in report.values()):
        return ANALYTIC_COLUMNS, [dict(label=k, **v.as_row()) for k, v in report.items()]
    if isinstance(report, list) and all(isinstance(r, ComparisonReport) for r in report):
        return COMPARISON_COLUMNS, [r.as_row() for r in report]
    raise TypeError(f"don't know how to tabulate {type(report).__name__}")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)  # JSON has no inf / nan
    return v


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(columns, rows, extra: dict = None) -> str:
    doc = dict(extra or {})
    doc["columns"] = columns
    doc["rows"] = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
    return json.dumps(doc, indent=2) + "\n"


def render(report, fmt: str, kind: str = None) -> str:
    columns, rows = tabulate(report, kind)
    if fmt == "csv":
        return to_csv(columns, rows)
    if fmt == "json":
        extra = {}
        if isinstance(report, OptimizationResult):
            extra = {"best": list(report.best.as_tuple()),
                     "feasible_count": report.feasible_count,
                     "evaluated_count": report.evaluated_count}
        elif isinstance(report, ValidationReport):
            extra = {"seed": report.seed}
        return to_json(columns, rows, extra)
    raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def emit(report, fmt: str, path, kind: str = None) -> Path:
    """Write ``report`` to ``path`` as csv or json."""
    text = render(report, fmt, kind)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"{path}: cannot write report: {exc.strerror}") from None
    return path


def load_json_rows(path) -> List[dict]:
    return json.loads(Path(path).read_text())["rows"]
