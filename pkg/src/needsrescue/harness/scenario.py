"""Scenario files: schema, defaults, validation and (de)serialisation.

A scenario is a YAML mapping.  Every key is optional except ``name`` and the
robot counts; omitted values fall back to :mod:`needsrescue.defaults`.

.. code-block:: yaml

    name: sc4_heterogeneous_coop
    duration_s: 300          # mission length, seconds
    dt_s: 0.1                # simulation tick, seconds
    cooperation: true        # cooperative speed change + shared obstacle map
    victims: ample           # or a non-negative integer
    rescue_time_s: 1.0       # handling time at the rescue site per round
    energy_step: 0.1         # distance of one moving step
    sites:
      shelter: [0, 0]
      rescue: [20, 0]
      charger: [-5, 0]
    navigation:
      lane_offset: 1.0       # outbound lane at +offset, return lane at -offset
      safety_radius: 0.5
      arrival_radius: 1.5
      spawn_jitter: 0.2
      stall_ticks: 10        # held ticks before a sidestep is planned
    obstacles:
      n: 12
      radius: 1.0
      t_c: 4.0               # seconds to tackle one obstacle
      e_c: 4.0               # energy percent to tackle one obstacle
      half_width: 10.0       # obstacles lie in |y| <= half_width
      margin: 2.0            # and at least this far (in x) from both sites
    robots:
      carrier:
        count: 3
        velocity: 1.0
        sense_range: 10.0    # or .inf
        per_step_energy: 0.045
        capacity: 8
        charge_threshold: 30.0
        charge_duration: 10.0
        coop_velocity_factor: 2.0
        layer: ground        # robots only conflict within a layer
      observer:
        count: 3
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Tuple

import yaml

from .. import defaults
from ..core import RobotClass


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    count: int = 0
    velocity: float = 1.0
    sense_range: float = 10.0
    per_step_energy: float = 0.045
    capacity: int = 1
    charge_threshold: float = 30.0
    charge_duration: float = 10.0
    coop_velocity_factor: float = 1.0
    layer: str = "ground"


@dataclass(frozen=True)
class ObstacleSpec:
    n: int = 0
    radius: float = 1.0
    t_c: float = 0.0
    e_c: float = 0.0
    half_width: float = 10.0
    margin: float = 2.0


@dataclass(frozen=True)
class Scenario:
    name: str
    robots: Dict[RobotClass, ClassSpec]
    duration_s: float = defaults.DURATION_S
    dt_s: float = defaults.DT_S
    cooperation: bool = False
    victims: Optional[int] = None  # None means ample
    rescue_time_s: float = defaults.RESCUE_TIME_S
    energy_step: float = defaults.ENERGY_STEP
    shelter: Tuple[float, float] = defaults.SHELTER
    rescue: Tuple[float, float] = defaults.RESCUE_SITE
    charger: Tuple[float, float] = defaults.CHARGER
    lane_offset: float = defaults.LANE_OFFSET
    safety_radius: float = defaults.SAFETY_RADIUS
    arrival_radius: float = defaults.ARRIVAL_RADIUS
    spawn_jitter: float = defaults.SPAWN_JITTER
    stall_ticks: int = defaults.STALL_TICKS
    obstacles: ObstacleSpec = field(default_factory=lambda: ObstacleSpec(**defaults.OBSTACLES))

    def spec(self, cls: RobotClass) -> ClassSpec:
        return self.robots[RobotClass(cls)]

    @property
    def team_size(self) -> int:
        return sum(s.count for s in self.robots.values())

    def with_changes(self, **changes) -> "Scenario":
        return replace(self, **changes)


def default_class_spec(cls: RobotClass, count: int = 0) -> ClassSpec:
    return ClassSpec(count=count, **defaults.ROBOT_CLASSES[RobotClass(cls).value])


def make_scenario(name: str, counts: Dict[str, int], **kwargs) -> Scenario:
    robots = {c: default_class_spec(c, counts.get(c.value, 0)) for c in RobotClass}
    sc = Scenario(name=name, robots=robots, **kwargs)
    validate(sc)
    return sc


# --------------------------------------------------------------------------
# validation

_TOP_KEYS = {"name", "duration_s", "dt_s", "cooperation", "victims", "rescue_time_s",
             "energy_step", "sites", "navigation", "obstacles", "robots"}
_SITE_KEYS = {"shelter", "rescue", "charger"}
_NAV_KEYS = {"lane_offset", "safety_radius", "arrival_radius", "spawn_jitter", "stall_ticks"}
_OBSTACLE_KEYS = set(ObstacleSpec.__dataclass_fields__)
_CLASS_KEYS = set(ClassSpec.__dataclass_fields__)


def _positive(v):
    return v > 0 and math.isfinite(v)


def _nonneg(v):
    return v >= 0 and math.isfinite(v)


def validate(sc: Scenario):
    """Raise :class:`ScenarioError` naming the first out-of-range field."""
    def bad(fieldname, msg):
        raise ScenarioError(f"scenario {sc.name!r}: field '{fieldname}' {msg}")

    if not sc.name:
        bad("name", "must be a non-empty string")
    if not _positive(sc.duration_s):
        bad("duration_s", f"must be > 0, got {sc.duration_s}")
    if not _positive(sc.dt_s):
        bad("dt_s", f"must be > 0, got {sc.dt_s}")
    if sc.dt_s > sc.duration_s:
        bad("dt_s", "must not exceed duration_s")
    if sc.victims is not None and (not isinstance(sc.victims, int) or sc.victims < 0):
        bad("victims", f"must be 'ample' or a non-negative integer, got {sc.victims!r}")
    if not _nonneg(sc.rescue_time_s):
        bad("rescue_time_s", f"must be >= 0, got {sc.rescue_time_s}")
    if not _positive(sc.energy_step):
        bad("energy_step", f"must be > 0, got {sc.energy_step}")
    for key in ("lane_offset", "arrival_radius", "safety_radius"):
        if not _positive(getattr(sc, key)):
            bad(f"navigation.{key}", f"must be > 0, got {getattr(sc, key)}")
    if not _nonneg(sc.spawn_jitter):
        bad("navigation.spawn_jitter", f"must be >= 0, got {sc.spawn_jitter}")
    if not isinstance(sc.stall_ticks, int) or sc.stall_ticks < 1:
        bad("navigation.stall_ticks", f"must be a positive integer, got {sc.stall_ticks!r}")
    if sc.arrival_radius <= sc.safety_radius:
        bad("navigation.arrival_radius", "must exceed navigation.safety_radius")
    if 2 * sc.lane_offset <= sc.safety_radius:
        bad("navigation.lane_offset", "lanes must be separated by more than the safety radius")
    sites = {"shelter": sc.shelter, "rescue": sc.rescue, "charger": sc.charger}
    for key, pos in sites.items():
        if len(pos) != 2 or not all(math.isfinite(v) for v in pos):
            bad(f"sites.{key}", f"must be a finite [x, y] pair, got {pos!r}")
    names = list(sites)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if math.dist(sites[a], sites[b]) < 2 * sc.arrival_radius + sc.lane_offset:
                bad(f"sites.{b}", f"overlaps sites.{a}")
    ob = sc.obstacles
    if not isinstance(ob.n, int) or ob.n < 0:
        bad("obstacles.n", f"must be a non-negative integer, got {ob.n!r}")
    for key in ("radius", "half_width"):
        if not _positive(getattr(ob, key)):
            bad(f"obstacles.{key}", f"must be > 0, got {getattr(ob, key)}")
    for key in ("t_c", "e_c", "margin"):
        if not _nonneg(getattr(ob, key)):
            bad(f"obstacles.{key}", f"must be >= 0, got {getattr(ob, key)}")
    if set(sc.robots) != set(RobotClass):
        bad("robots", "must define every robot class")
    for cls, spec in sc.robots.items():
        p = f"robots.{cls.value}"
        if not isinstance(spec.count, int) or spec.count < 0:
            bad(f"{p}.count", f"must be a non-negative integer, got {spec.count!r}")
        if not _positive(spec.velocity):
            bad(f"{p}.velocity", f"must be > 0, got {spec.velocity}")
        if not spec.sense_range > 0:
            bad(f"{p}.sense_range", f"must be > 0 or .inf, got {spec.sense_range}")
        if not _nonneg(spec.per_step_energy) or spec.per_step_energy > 100:
            bad(f"{p}.per_step_energy", f"must lie in [0, 100], got {spec.per_step_energy}")
        if not isinstance(spec.capacity, int) or spec.capacity < 0:
            bad(f"{p}.capacity", f"must be a non-negative integer, got {spec.capacity!r}")
        if not 0 <= spec.charge_threshold < 100:
            bad(f"{p}.charge_threshold", f"must lie in [0, 100), got {spec.charge_threshold}")
        if not _nonneg(spec.charge_duration):
            bad(f"{p}.charge_duration", f"must be >= 0, got {spec.charge_duration}")
        if not _positive(spec.coop_velocity_factor):
            bad(f"{p}.coop_velocity_factor", f"must be > 0, got {spec.coop_velocity_factor}")
        if spec.layer not in ("ground", "air"):
            bad(f"{p}.layer", f"must be 'ground' or 'air', got {spec.layer!r}")
    if sc.team_size < 1:
        bad("robots", "must contain at least one robot")


# --------------------------------------------------------------------------
# YAML with line tracking

def _parse(text: str, source: str):
    """Parse YAML, returning (data, {path tuple: line number})."""
    try:
        loader = yaml.SafeLoader(text)
        try:
            node = loader.get_single_node()
            data = loader.construct_document(node) if node is not None else None
        finally:
            loader.dispose()
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark else source
        raise ScenarioError(f"{where}: malformed YAML: {getattr(exc, 'problem', exc)}") from None
    lines = {}

    def walk(n, path):
        lines.setdefault(path, n.start_mark.line + 1)
        if isinstance(n, yaml.MappingNode):
            for k, v in n.value:
                key = k.value
                lines[path + (key,)] = k.start_mark.line + 1
                walk(v, path + (key,))

    if node is not None:
        walk(node, ())
    return data, lines


class _Reader:
    def __init__(self, source, lines):
        self.source = source
        self.lines = lines

    def where(self, path):
        for i in range(len(path), -1, -1):
            if path[:i] in self.lines:
                return f"{self.source}:{self.lines[path[:i]]}"
        return self.source

    def fail(self, path, msg):
        raise ScenarioError(f"{self.where(path)}: field '{'.'.join(path)}' {msg}")

    def mapping(self, value, path, allowed):
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.fail(path, "must be a mapping")
        for key in value:
            if key not in allowed:
                self.fail(path + (str(key),), f"is not a recognised key (allowed: {', '.join(sorted(allowed))})")
        return value

    def number(self, value, path, integer=False):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"must be a number, got {value!r}")
        if integer:
            if isinstance(value, float):
                if not value.is_integer():
                    self.fail(path, f"must be an integer, got {value!r}")
                value = int(value)
            return value
        return float(value)

    def point(self, value, path):
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            self.fail(path, f"must be an [x, y] pair, got {value!r}")
        return tuple(self.number(v, path) for v in value)


def scenario_from_dict(data, source: str = "<scenario>", lines=None) -> Scenario:
    r = _Reader(source, lines or {})
    top = r.mapping(data, (), _TOP_KEYS)
    if "name" not in top or not isinstance(top["name"], str) or not top["name"]:
        r.fail(("name",), "is required and must be a non-empty string")
    kw = {"name": top["name"]}
    for key in ("duration_s", "dt_s", "rescue_time_s", "energy_step"):
        if key in top:
            kw[key] = r.number(top[key], (key,))
    if "cooperation" in top:
        if not isinstance(top["cooperation"], bool):
            r.fail(("cooperation",), f"must be true or false, got {top['cooperation']!r}")
        kw["cooperation"] = top["cooperation"]
    if "victims" in top:
        v = top["victims"]
        if v == "ample":
            kw["victims"] = None
        else:
            kw["victims"] = r.number(v, ("victims",), integer=True)
    sites = r.mapping(top.get("sites"), ("sites",), _SITE_KEYS)
    for key in _SITE_KEYS:
        if key in sites:
            kw[key] = r.point(sites[key], ("sites", key))
    nav = r.mapping(top.get("navigation"), ("navigation",), _NAV_KEYS)
    for key in _NAV_KEYS:
        if key in nav:
            kw[key] = r.number(nav[key], ("navigation", key), integer=(key == "stall_ticks"))
    obs = r.mapping(top.get("obstacles"), ("obstacles",), _OBSTACLE_KEYS)
    ob_kw = dict(defaults.OBSTACLES)
    for key in obs:
        ob_kw[key] = r.number(obs[key], ("obstacles", key), integer=(key == "n"))
    kw["obstacles"] = ObstacleSpec(**ob_kw)
    robots_in = r.mapping(top.get("robots"), ("robots",), {c.value for c in RobotClass})
    robots = {}
    for cls in RobotClass:
        spec_in = r.mapping(robots_in.get(cls.value), ("robots", cls.value), _CLASS_KEYS)
        spec_kw = dict(defaults.ROBOT_CLASSES[cls.value])
        spec_kw["count"] = 0
        for key, value in spec_in.items():
            path = ("robots", cls.value, key)
            if key == "layer":
                spec_kw[key] = value
            else:
                spec_kw[key] = r.number(value, path, integer=key in ("count", "capacity"))
        robots[cls] = ClassSpec(**spec_kw)
    kw["robots"] = robots
    sc = Scenario(**kw)
    try:
        validate(sc)
    except ScenarioError as exc:
        # re-anchor the message on the offending line when we can find it
        msg = str(exc)
        start = msg.find("field '")
        if start >= 0:
            fname = msg[start + 7:msg.find("'", start + 7)]
            path = tuple(fname.split("."))
            if path[0] in ("shelter", "rescue", "charger"):
                path = ("sites",) + path
            raise ScenarioError(f"{r.where(path)}: {msg}") from None
        raise
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario: {exc.strerror}") from None
    data, lines = _parse(text, str(path))
    return scenario_from_dict(data, str(path), lines)


def loads_scenario(text: str, source: str = "<string>") -> Scenario:
    data, lines = _parse(text, source)
    return scenario_from_dict(data, source, lines)


def scenario_to_dict(sc: Scenario) -> dict:
    def num(v):
        return float(v) if isinstance(v, float) else v

    robots = {}
    for cls in RobotClass:
        d = asdict(sc.spec(cls))
        robots[cls.value] = {k: num(v) for k, v in d.items()}
    return {
        "name": sc.name,
        "duration_s": sc.duration_s,
        "dt_s": sc.dt_s,
        "cooperation": sc.cooperation,
        "victims": "ample" if sc.victims is None else sc.victims,
        "rescue_time_s": sc.rescue_time_s,
        "energy_step": sc.energy_step,
        "sites": {"shelter": list(sc.shelter), "rescue": list(sc.rescue),
                  "charger": list(sc.charger)},
        "navigation": {k: getattr(sc, k) for k in ("lane_offset", "safety_radius",
                                                   "arrival_radius", "spawn_jitter",
                                                   "stall_ticks")},
        "obstacles": asdict(sc.obstacles),
        "robots": robots,
    }


def dump_scenario(sc: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(sc), sort_keys=False, default_flow_style=False)


# --------------------------------------------------------------------------
# shipped scenarios

SHIPPED = ("sc1_homogeneous_carriers", "sc2_homogeneous_observers",
           "sc3_heterogeneous_noncoop", "sc4_heterogeneous_coop")


def shipped_path(name: str) -> Path:
    return Path(__file__).resolve().parent.parent / "scenarios" / f"{name}.yaml"


def shipped_scenarios():
    return [load_scenario(shipped_path(n)) for n in SHIPPED]
