"""Exhaustive team-composition search under a robot budget."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from .analytic import AnalyticReport, analyze
from .core import MissionSpec, ProfileSet, TeamComposition, aggregate_capability

MAX_BUDGET = 60


class NoFeasibleComposition(ValueError):
    pass


def enumerate_compositions(budget: int, exact: bool = True) -> List[TeamComposition]:
    """All (x, y, z) with x+y+z == budget (or 1..budget), lexicographic."""
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise ValueError(f"budget must be a positive integer, got {budget!r}")
    out = []
    lo = budget if exact else 1
    for x in range(budget + 1):
        for y in range(budget - x + 1):
            for z in range(budget - x - y + 1):
                if lo <= x + y + z:
                    out.append(TeamComposition(x, y, z))
    return out


def delivered(comp: TeamComposition, mission: MissionSpec, profiles: ProfileSet,
              report: AnalyticReport = None) -> tuple:
    """Expected cumulative (capacity, resources) delivered over the mission."""
    report = report or analyze(comp, mission, profiles)
    agg = aggregate_capability(comp, profiles)
    return (report.expected_rounds * agg.total_cap, report.expected_rounds * agg.total_res)


def is_feasible(comp: TeamComposition, mission: MissionSpec, profiles: ProfileSet,
                report: AnalyticReport = None) -> bool:
    req = mission.requirement
    if len(req) > 2:
        raise ValueError(f"requirement has {len(req)} components; only (capacity, resources) are supported")
    if not req:
        return True
    got = delivered(comp, mission, profiles, report)
    return all(g >= r for g, r in zip(got, req))


def rank_key(report: AnalyticReport):
    """Higher utility first, then lower energy, then smallest (x, y, z)."""
    return (-report.expected_utility, report.expected_energy, report.composition.as_tuple())


@dataclass
class OptimizationResult:
    best: TeamComposition
    report: AnalyticReport
    feasible_count: int
    evaluated_count: int
    ranking: List[AnalyticReport] = field(default_factory=list, repr=False)


def optimize_team(budget: int, mission: MissionSpec, profiles: ProfileSet,
                  exact: bool = True) -> OptimizationResult:
    if budget > MAX_BUDGET:
        raise ValueError(f"budget {budget} exceeds the enumeration guard ({MAX_BUDGET})")
    candidates = enumerate_compositions(budget, exact)
    feasible = []
    for comp in candidates:
        report = analyze(comp, mission, profiles)
        if is_feasible(comp, mission, profiles, report):
            feasible.append(report)
    if not feasible:
        raise NoFeasibleComposition(
            f"no feasible composition within budget {budget} for requirement {mission.requirement}")
    feasible.sort(key=rank_key)
    best = feasible[0]
    return OptimizationResult(best.composition, best, len(feasible), len(candidates), feasible)
