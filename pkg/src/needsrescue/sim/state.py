"""Robot state, phases and intents shared by the world and the behaviours."""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Set, Tuple

from ..core import RobotClass

Point = Tuple[float, float]


class Phase(str, Enum):
    TO_SITE = "to_site"
    RESCUING = "rescuing"
    TO_SHELTER = "to_shelter"
    UNLOADING = "unloading"
    TO_CHARGE = "to_charge"
    CHARGING = "charging"
    IDLE = "idle"


# kind is one of move, hold, work, unload, charge, idle.  ``phase`` and
# ``route`` are only set when the intent also switches the robot's task.
Intent = namedtuple("Intent", "kind target phase route", defaults=(None, None, None))

MOVE_KINDS = ("move",)


@dataclass
class RobotState:
    id: int
    cls: RobotClass
    position: Point
    velocity: float
    energy: float
    per_step_energy: float
    capacity: int
    sense_range: float
    layer: str
    charge_threshold: float
    charge_ticks: int
    knows_obstacles: bool = False
    load: int = 0
    phase: Phase = Phase.TO_SITE
    route: List[Point] = field(default_factory=list)
    goal: Optional[Point] = None
    wp: int = 0
    timer: int = 0      # ticks left in RESCUING / CHARGING
    delay: int = 0      # ticks left tackling an obstacle
    held: int = 0       # consecutive ticks a wanted move was refused
    inside: Set[int] = field(default_factory=set)
    # accounting
    energy_spent: float = 0.0
    rescued: int = 0
    rounds: int = 0
    charges: int = 0
    tackles: int = 0
    distance: float = 0.0

    def check(self):
        if not 0.0 <= self.energy <= 100.0:
            raise AssertionError(f"robot {self.id}: energy {self.energy} outside [0, 100]")
        if not 0 <= self.load <= self.capacity:
            raise AssertionError(f"robot {self.id}: load {self.load} outside [0, {self.capacity}]")

    def set_task(self, phase: Phase, route=(), goal=None):
        self.phase = phase
        self.route = list(route)
        self.goal = goal
        self.wp = 0
        self.held = 0

    @property
    def waypoint(self) -> Optional[Point]:
        if self.wp < len(self.route):
            return self.route[self.wp]
        return None


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def step_toward(pos: Point, target: Point, max_step: float) -> Point:
    dx = target[0] - pos[0]
    dy = target[1] - pos[1]
    d = math.hypot(dx, dy)
    if d <= max_step:
        return (target[0], target[1])
    f = max_step / d
    return (pos[0] + dx * f, pos[1] + dy * f)


class Geometry:
    """Station layout and the one-way lane routes between them.

    Robots head out on the lane ``lane_offset`` to the left of the
    shelter-to-site axis and return on the lane the same distance to its
    right.  Each station is surrounded by a docking zone of
    ``arrival_radius`` in which spacing is not enforced.
    """

    def __init__(self, shelter: Point, site: Point, charger: Point,
                 lane_offset: float, arrival_radius: float):
        self.shelter = tuple(shelter)
        self.site = tuple(site)
        self.charger = tuple(charger)
        self.h = lane_offset
        self.arrival_radius = arrival_radius
        self.length = dist(shelter, site)
        ex = (site[0] - shelter[0]) / self.length
        ey = (site[1] - shelter[1]) / self.length
        self.e = (ex, ey)
        self.n = (-ey, ex)
        self._stations = (self.shelter, self.site, self.charger)

    def at(self, u: float, v: float) -> Point:
        """Point ``u`` along the axis from the shelter and ``v`` to its left."""
        return (self.shelter[0] + u * self.e[0] + v * self.n[0],
                self.shelter[1] + u * self.e[1] + v * self.n[1])

    def frame(self, p: Point) -> Tuple[float, float]:
        dx = p[0] - self.shelter[0]
        dy = p[1] - self.shelter[1]
        return (dx * self.e[0] + dy * self.e[1], dx * self.n[0] + dy * self.n[1])

    def outbound(self):
        return [self.at(0.0, self.h), self.at(self.length, self.h)], self.site

    def inbound(self):
        return [self.at(self.length, -self.h), self.at(0.0, -self.h)], self.shelter

    def to_charger(self, p: Point):
        u, v = self.frame(p)
        route = []
        if u > 0:
            if v > -self.h / 2:
                route.append(self.at(min(u, self.length), -self.h))
            route.append(self.at(0.0, -self.h))
        route.append(self.charger)
        return route, self.charger

    def resume(self, loaded: bool):
        if loaded:
            return [self.at(0.0, -self.h)], self.shelter
        return self.outbound()

    def in_zone(self, p: Point) -> bool:
        r2 = self.arrival_radius * self.arrival_radius
        for s in self._stations:
            dx = p[0] - s[0]
            dy = p[1] - s[1]
            if dx * dx + dy * dy <= r2:
                return True
        return False

    @staticmethod
    def sidestep(pos: Point, target: Point, size: float) -> Point:
        """A point ``size`` to the right of the heading from pos to target."""
        d = dist(pos, target)
        if d == 0:
            return pos
        rx = (target[1] - pos[1]) / d
        ry = -(target[0] - pos[0]) / d
        return (pos[0] + rx * size, pos[1] + ry * size)
