"""Closed-form expectations for rescue groups under Poisson obstacle encounters.

A group shuttles between its start point and a rescue site at distance ``l``.
Per round it travels ``2 l / v`` and tackles obstacles at a cost of ``t_c``
each, with encounters arriving at rate ``c n / sen`` (``sen`` = summed
sensing of the group).  Each round also spends one unit of rescue time, so the
expected number of rounds in ``t_n`` is ``t_n * E[1 / (T + 1)]`` with
``T ~ Poisson(lambda)``, which evaluates to ``t_n (1 - exp(-lambda)) / lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .core import (MissionSpec, ProfileSet, TeamComposition, aggregate_capability)


def encounter_rate(c: float, n: int, sen_total: float) -> float:
    if not sen_total > 0:
        raise ValueError(f"sen_total must be > 0, got {sen_total!r}")
    if n == 0 or math.isinf(sen_total):
        return 0.0
    return c * n / sen_total


def round_trip_lambda(mission: MissionSpec, group_v: float, sen_total: float) -> float:
    if not group_v > 0:
        raise ValueError(f"group velocity must be > 0, got {group_v!r}")
    return 2.0 * mission.l / group_v + 2.0 * mission.t_c * encounter_rate(mission.c, mission.n, sen_total)


def poisson_reciprocal_expectation(lam: float) -> float:
    """E[1/(T+1)] for T ~ Poisson(lam), i.e. (1 - e^-lam) / lam (1 at lam = 0)."""
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam!r}")
    if lam == 0:
        return 1.0
    return -math.expm1(-lam) / lam


def expected_rounds(t_n: float, lam: float) -> float:
    if not t_n > 0:
        raise ValueError(f"t_n must be > 0, got {t_n!r}")
    return t_n * poisson_reciprocal_expectation(lam)


def effective_throughput(total_cap: float, total_res: float) -> float:
    """Per-round rescued amount: bounded by both carrying space and supplies."""
    return min(total_cap, total_res)


@dataclass(frozen=True)
class AnalyticReport:
    composition: TeamComposition
    mission: MissionSpec
    group_v: float
    sen_total: float
    lambda_round: float
    expected_rounds: float
    throughput_per_round: float
    expected_utility: float
    expected_energy: float

    @property
    def energy_per_unit(self) -> Optional[float]:
        if self.expected_utility <= 0:
            return None
        return self.expected_energy / self.expected_utility

    def as_row(self) -> dict:
        return {
            "x": self.composition.x,
            "y": self.composition.y,
            "z": self.composition.z,
            "group_v": self.group_v,
            "sen_total": self.sen_total,
            "lambda_round": self.lambda_round,
            "expected_rounds": self.expected_rounds,
            "throughput_per_round": self.throughput_per_round,
            "expected_utility": self.expected_utility,
            "expected_energy": self.expected_energy,
            "energy_per_unit": self.energy_per_unit,
        }


def analyze(comp: TeamComposition, mission: MissionSpec, profiles: ProfileSet) -> AnalyticReport:
    agg = aggregate_capability(comp, profiles)
    lam = round_trip_lambda(mission, agg.min_v, agg.total_sen)
    rounds = expected_rounds(mission.t_n, lam)
    throughput = effective_throughput(agg.total_cap, agg.total_res)
    utility = rounds * throughput
    # one energy point per rescued unit on top of travel and obstacle costs
    energy = mission.e_t + 2.0 * encounter_rate(mission.c, mission.n, agg.total_sen) * mission.e_c + utility
    return AnalyticReport(comp, mission, agg.min_v, agg.total_sen, lam, rounds,
                          throughput, utility, energy)


def expected_utility(comp: TeamComposition, mission: MissionSpec, profiles: ProfileSet) -> float:
    return analyze(comp, mission, profiles).expected_utility


def expected_energy(comp: TeamComposition, mission: MissionSpec, profiles: ProfileSet) -> float:
    return analyze(comp, mission, profiles).expected_energy


# Tags for the textbook comparisons a pair of groups can exemplify.
HOMO_VS_HOMO = "homogeneous_vs_homogeneous"
HETERO_VS_HETERO = "heterogeneous_vs_heterogeneous"
HETERO_VS_HOMO = "heterogeneous_vs_homogeneous"
EQUAL_ENERGY = "equal_expected_energy"
HETERO_HIGHER_UTILITY = "heterogeneous_higher_utility"
HETERO_CHEAPER_PER_UNIT = "heterogeneous_cheaper_per_unit"
CARRIER_SUPPLIER_OVER_CARRIERS = "carrier_supplier_over_carriers"


@dataclass(frozen=True)
class ComparisonReport:
    a: str
    b: str
    utility_ratio: float
    energy_difference: float
    energy_per_unit_difference: Optional[float]
    dominant: str
    notes: List[str] = field(default_factory=list)

    def as_row(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "utility_ratio": self.utility_ratio,
            "energy_difference": self.energy_difference,
            "energy_per_unit_difference": self.energy_per_unit_difference,
            "dominant": self.dominant,
            "notes": ";".join(self.notes),
        }


def compare(a: AnalyticReport, b: AnalyticReport, label_a: str = None,
            label_b: str = None, margin: float = 1e-9) -> ComparisonReport:
    """Compare two groups analysed against the same mission.

    ``energy_difference`` is the raw E(E)_a - E(E)_b; because every rescued
    unit costs one energy point, a group that rescues more also spends more in
    total, so the per-unit difference is reported alongside it.
    """
    if a.mission != b.mission:
        raise ValueError("cannot compare reports computed for different missions")
    if not b.expected_utility > 0:
        raise ValueError("reference group has zero expected utility")
    label_a = label_a or str(a.composition)
    label_b = label_b or str(b.composition)

    ratio = a.expected_utility / b.expected_utility
    diff = a.expected_energy - b.expected_energy
    epu_a, epu_b = a.energy_per_unit, b.energy_per_unit
    epu_diff = None if epu_a is None else epu_a - epu_b

    if a.expected_utility > b.expected_utility:
        dominant = label_a
    elif b.expected_utility > a.expected_utility:
        dominant = label_b
    else:
        dominant = "tie"

    notes = []
    ca, cb = a.composition, b.composition
    if ca.is_homogeneous and cb.is_homogeneous:
        notes.append(HOMO_VS_HOMO)
    elif not ca.is_homogeneous and not cb.is_homogeneous:
        notes.append(HETERO_VS_HETERO)
    else:
        notes.append(HETERO_VS_HOMO)
    if abs(diff) <= margin:
        notes.append(EQUAL_ENERGY)
    if not ca.is_homogeneous and cb.is_homogeneous:
        if ratio > 1 + margin:
            notes.append(HETERO_HIGHER_UTILITY)
        if epu_diff is not None and epu_diff < -margin:
            notes.append(HETERO_CHEAPER_PER_UNIT)
        if (ca.x > 0 and ca.y > 0 and ca.z == 0 and cb.x == cb.size
                and ca.size == cb.size and ratio > 1 + margin):
            notes.append(CARRIER_SUPPLIER_OVER_CARRIERS)
    return ComparisonReport(label_a, label_b, ratio, diff, epu_diff, dominant, notes)
