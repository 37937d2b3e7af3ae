"""Multi-scenario, multi-trial experiment orchestration and statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..sim.world import TrialMetrics, run_trial


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class Stat:
    count: int
    mean: Optional[float]
    min: Optional[float]
    max: Optional[float]
    sd: Optional[float]  # sample deviation, None when count < 2


def describe(values: Sequence[Optional[float]]) -> Stat:
    """Mean, range and (n - 1) standard deviation of the defined values."""
    xs = [float(v) for v in values if v is not None]
    n = len(xs)
    if n == 0:
        return Stat(0, None, None, None, None)
    mean = math.fsum(xs) / n
    sd = None
    if n >= 2:
        sd = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1))
    return Stat(n, mean, min(xs), max(xs), sd)


@dataclass(frozen=True)
class TrialRecord:
    scenario: str
    trial: int
    seed: int
    metrics: TrialMetrics


@dataclass(frozen=True)
class ScenarioStats:
    scenario: str
    n_trials: int
    rescued: Stat
    energy: Stat
    energy_per_unit: Stat


@dataclass(frozen=True)
class AggregateStats:
    rows: List[ScenarioStats]
    trials: List[TrialRecord]

    def row(self, name: str) -> ScenarioStats:
        for r in self.rows:
            if r.scenario == name:
                return r
        raise KeyError(name)


def _run(job):
    sc, trial, seed = job
    try:
        return TrialRecord(sc.name, trial, seed, run_trial(sc, seed))
    except Exception as exc:
        raise ExperimentError(f"scenario {sc.name!r} trial {trial} (seed {seed}) failed: {exc}") from exc


def run_experiment(scenarios, trials: int, base_seed: int = 0,
                   workers: int = 1) -> AggregateStats:
    """Run ``trials`` seeded trials of every scenario (seed = base_seed + i).

    Results are keyed by (scenario, trial index), so the output does not
    depend on ``workers`` or on completion order.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    names = [sc.name for sc in scenarios]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ValueError(f"scenario names must be unique, repeated: {', '.join(dupes)}")
    jobs = [(sc, i, base_seed + i) for sc in scenarios for i in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_run, jobs))
    else:
        done = [_run(j) for j in jobs]
    by_key = {(r.scenario, r.trial): r for r in done}
    records = [by_key[(n, i)] for n in names for i in range(trials)]

    rows = []
    for name in names:
        ms = [r.metrics for r in records if r.scenario == name]
        rows.append(ScenarioStats(
            scenario=name,
            n_trials=len(ms),
            rescued=describe([m.rescued_units for m in ms]),
            energy=describe([m.total_energy_spent for m in ms]),
            energy_per_unit=describe([m.energy_per_unit for m in ms]),
        ))
    return AggregateStats(rows, records)
