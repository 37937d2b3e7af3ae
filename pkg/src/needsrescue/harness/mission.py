"""Mission files for the ``analytic`` and ``optimize`` commands.

.. code-block:: yaml

    mission:
      t_n: 300          # mission time
      l: 20             # distance to the rescue site
      n: 12             # obstacle count
      c: 1.0
      t_c: 4.0
      e_c: 4.0
      e_t: 0.0
      requirement: [100, 100]   # delivered (capacity, resources); optional
    profiles:           # optional per-class overrides of the built-ins
      carrier: {cap: 8}
    teams:              # named (carriers, suppliers, observers) for `analytic`
      carriers: [6, 0, 0]
      mixed: [3, 3, 0]
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict

from ..core import (CapabilityProfile, MissionSpec, ProfileSet, RobotClass, TeamComposition,
                    default_profiles)
from .scenario import ScenarioError, _parse, _Reader

_MISSION_KEYS = {f.name for f in fields(MissionSpec)}
_PROFILE_KEYS = {f.name for f in fields(CapabilityProfile)}


@dataclass
class MissionFile:
    mission: MissionSpec
    profiles: ProfileSet
    teams: Dict[str, TeamComposition] = field(default_factory=dict)


def parse_team(text: str) -> TeamComposition:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 3:
        raise ValueError(f"team must be 'x,y,z', got {text!r}")
    try:
        return TeamComposition(*(int(p) for p in parts))
    except ValueError as exc:
        raise ValueError(f"bad team {text!r}: {exc}") from None


def mission_from_dict(data, source="<mission>", lines=None) -> MissionFile:
    r = _Reader(source, lines or {})
    top = r.mapping(data, (), {"mission", "profiles", "teams"})
    if "mission" not in top:
        r.fail(("mission",), "is required")
    m_in = r.mapping(top["mission"], ("mission",), _MISSION_KEYS)
    kw = {}
    for key, value in m_in.items():
        path = ("mission", key)
        if key == "requirement":
            if not isinstance(value, list):
                r.fail(path, f"must be a list, got {value!r}")
            kw[key] = tuple(r.number(v, path) for v in value)
        else:
            kw[key] = r.number(value, path, integer=(key == "n"))
    try:
        mission = MissionSpec(**kw)
    except (TypeError, ValueError) as exc:
        key = str(exc).split()[0]
        if key in _MISSION_KEYS:
            r.fail(("mission", key), str(exc)[len(key) + 1:])
        r.fail(("mission",), str(exc))

    profiles = default_profiles()
    p_in = r.mapping(top.get("profiles"), ("profiles",), {c.value for c in RobotClass})
    for cls_name, overrides in p_in.items():
        path = ("profiles", cls_name)
        changes = {}
        for key, value in r.mapping(overrides, path, _PROFILE_KEYS).items():
            changes[key] = r.number(value, path + (key,))
        try:
            profiles = profiles.replace(RobotClass(cls_name), **changes)
        except ValueError as exc:
            r.fail(path, str(exc))

    teams = {}
    t_in = top.get("teams") or {}
    if not isinstance(t_in, dict):
        r.fail(("teams",), "must be a mapping of name -> [x, y, z]")
    for name, value in t_in.items():
        path = ("teams", str(name))
        if not isinstance(value, list) or len(value) != 3:
            r.fail(path, f"must be [x, y, z], got {value!r}")
        try:
            teams[str(name)] = TeamComposition(*(r.number(v, path, integer=True) for v in value))
        except ValueError as exc:
            r.fail(path, str(exc))
    return MissionFile(mission, profiles, teams)


def load_mission(path) -> MissionFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read mission: {exc.strerror}") from None
    data, lines = _parse(text, str(path))
    return mission_from_dict(data, str(path), lines)


def profiles_as_dict(profiles: ProfileSet) -> dict:
    return {c.value: profiles.of(c).as_dict() for c in RobotClass}
