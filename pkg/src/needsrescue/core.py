"""Domain types shared by the analytic engine, the optimizer and the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Iterator, List, Tuple

from . import defaults


class RobotClass(str, Enum):
    CARRIER = "carrier"
    SUPPLIER = "supplier"
    OBSERVER = "observer"


@dataclass(frozen=True)
class CapabilityProfile:
    """Per-class capability vector.

    ``sen`` may be ``math.inf`` (whole-map perception).  ``eng`` is a battery
    level in percent.
    """

    v: float
    com: float
    sen: float
    eng: float
    res: float
    cap: float

    def __post_init__(self):
        if not (self.v > 0 and math.isfinite(self.v)):
            raise ValueError(f"v must be a positive finite number, got {self.v!r}")
        for name in ("com", "res", "cap"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if not self.sen > 0:
            raise ValueError(f"sen must be > 0 (or inf), got {self.sen!r}")
        if not 0 <= self.eng <= 100:
            raise ValueError(f"eng must lie in [0, 100], got {self.eng!r}")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ProfileSet:
    carrier: CapabilityProfile
    supplier: CapabilityProfile
    observer: CapabilityProfile

    def of(self, cls: RobotClass) -> CapabilityProfile:
        return getattr(self, RobotClass(cls).value)

    def replace(self, cls: RobotClass, **changes) -> "ProfileSet":
        current = self.of(cls).as_dict()
        current.update(changes)
        parts = {c.value: self.of(c) for c in RobotClass}
        parts[RobotClass(cls).value] = CapabilityProfile(**current)
        return ProfileSet(**parts)


@dataclass(frozen=True, order=True)
class TeamComposition:
    """Counts of carriers (x), suppliers (y) and observers (z)."""

    x: int = 0
    y: int = 0
    z: int = 0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def size(self) -> int:
        return self.x + self.y + self.z

    def count(self, cls: RobotClass) -> int:
        return {RobotClass.CARRIER: self.x, RobotClass.SUPPLIER: self.y,
                RobotClass.OBSERVER: self.z}[RobotClass(cls)]

    def members(self) -> Iterator[Tuple[RobotClass, int]]:
        """(class, count) pairs for classes actually present."""
        for cls in RobotClass:
            n = self.count(cls)
            if n:
                yield cls, n

    @property
    def is_homogeneous(self) -> bool:
        return sum(1 for _ in self.members()) == 1

    def require_nonempty(self):
        if self.size < 1:
            raise ValueError("composition must contain at least one robot")

    def __add__(self, other: "TeamComposition") -> "TeamComposition":
        return TeamComposition(self.x + other.x, self.y + other.y, self.z + other.z)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.x, self.y, self.z)

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


@dataclass(frozen=True)
class MissionSpec:
    """Mission and environment parameters for the closed-form model.

    ``requirement`` is the required delivered (capacity, resources) vector;
    an empty tuple means the mission is unconstrained.
    """

    t_n: float
    l: float
    n: int = 0
    c: float = 1.0
    t_c: float = 0.0
    e_c: float = 0.0
    e_t: float = 0.0
    requirement: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.t_n > 0:
            raise ValueError(f"t_n must be > 0, got {self.t_n!r}")
        if not self.l > 0:
            raise ValueError(f"l must be > 0, got {self.l!r}")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        if not self.c > 0:
            raise ValueError(f"c must be > 0, got {self.c!r}")
        for name in ("t_c", "e_c", "e_t"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        req = tuple(float(v) for v in self.requirement)
        if any(not v >= 0 for v in req):
            raise ValueError(f"requirement entries must be >= 0, got {req!r}")
        object.__setattr__(self, "requirement", req)


def default_profile(cls: RobotClass) -> CapabilityProfile:
    return CapabilityProfile(**defaults.PROFILES[RobotClass(cls).value])


def default_profiles() -> ProfileSet:
    return ProfileSet(*(default_profile(c) for c in RobotClass))


@dataclass(frozen=True)
class Violation:
    relation: str
    detail: str


def _approx(a: float, b: float, bounds) -> bool:
    if math.isinf(a) or math.isinf(b):
        return math.isinf(a) and math.isinf(b)
    lo, hi = bounds
    return b > 0 and lo <= a / b <= hi


def check_dominance(profiles: ProfileSet, factor: float = defaults.DOMINANCE_FACTOR,
                    approx=defaults.APPROX_RATIO) -> List[Violation]:
    """Check the class-specialisation ordering between the three profiles.

    One :class:`Violation` is returned per relation (communication, sensing,
    velocity, energy, resources, capacity) that has at least one failing
    clause.  An empty list means the profile set is consistent.
    """
    c, s, o = profiles.carrier, profiles.supplier, profiles.observer
    k = factor

    def much(a, b):
        return a >= k * b

    checks = {
        "communication": [
            (much(o.com, s.com), f"com_o={o.com} >= {k}*com_s={s.com}"),
            (much(o.com, c.com), f"com_o={o.com} >= {k}*com_c={c.com}"),
            (_approx(s.com, c.com, approx), f"com_s={s.com} ~ com_c={c.com}"),
        ],
        "sensing": [
            (much(o.sen, s.sen), f"sen_o={o.sen} >= {k}*sen_s={s.sen}"),
            (much(o.sen, c.sen), f"sen_o={o.sen} >= {k}*sen_c={c.sen}"),
            (_approx(s.sen, c.sen, approx), f"sen_s={s.sen} ~ sen_c={c.sen}"),
        ],
        "velocity": [
            (o.v > s.v, f"v_o={o.v} > v_s={s.v}"),
            (o.v > c.v, f"v_o={o.v} > v_c={c.v}"),
            (_approx(s.v, c.v, approx), f"v_s={s.v} ~ v_c={c.v}"),
        ],
        "energy": [
            (c.eng > s.eng, f"eng_c={c.eng} > eng_s={s.eng}"),
            (much(s.eng, o.eng), f"eng_s={s.eng} >= {k}*eng_o={o.eng}"),
        ],
        "resources": [
            (much(s.res, c.res), f"res_s={s.res} >= {k}*res_c={c.res}"),
            (c.res > o.res, f"res_c={c.res} > res_o={o.res}"),
        ],
        "capacity": [
            (much(c.cap, s.cap), f"cap_c={c.cap} >= {k}*cap_s={s.cap}"),
            (s.cap > o.cap, f"cap_s={s.cap} > cap_o={o.cap}"),
        ],
    }
    out = []
    for relation, clauses in checks.items():
        failed = [text for ok, text in clauses if not ok]
        if failed:
            out.append(Violation(relation, "; ".join(failed)))
    return out


@dataclass(frozen=True)
class Aggregate:
    total_cap: float
    total_res: float
    total_sen: float
    min_v: float


def aggregate_capability(comp: TeamComposition, profiles: ProfileSet) -> Aggregate:
    """Group totals; the group moves at its slowest member's speed."""
    comp.require_nonempty()
    total_cap = total_res = total_sen = 0.0
    min_v = math.inf
    for cls, n in comp.members():
        p = profiles.of(cls)
        total_cap += n * p.cap
        total_res += n * p.res
        total_sen += n * p.sen  # inf absorbs
        min_v = min(min_v, p.v)
    return Aggregate(total_cap, total_res, total_sen, min_v)
