"""Deterministic discrete-time rescue world.

Each :func:`step` has two phases.  First every robot ticks its needs tree
against a read-only view of the world and leaves one intent on its board.
Then the movement intents are negotiated and all mutations are applied in
robot-id order.

Energy is charged per distance: moving ``energy_step`` costs the robot's
``per_step_energy`` percent.  Ground robots that do not know the obstacle
map pay ``t_c`` seconds and ``e_c`` percent the first time they enter an
obstacle on each visit.  A robot knows the map when its own sensing is
unbounded, or when cooperation is on and a teammate's sensing is.

Trace lines (``trace=True``) have the form::

    <tick> t=<seconds> <event> robot=<id> key=value ...

with events ``move`` (x, y, energy), ``charge`` (state=start|done),
``unload`` (units, total), ``conflict`` (the held robot, winner=<id>), ``tackle`` (obstacle,
energy) and ``rescue`` (units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core import RobotClass
from ..needs_bt import tick_tree
from .behaviors import RobotBoard, default_registry, default_tree
from .negotiation import MoveIntent, negotiate_conflicts
from .state import Geometry, Intent, Phase, RobotState, dist, step_toward


@dataclass
class WorldState:
    scenario: object
    geometry: Geometry
    robots: List[RobotState]
    obstacles: List[Tuple[Tuple[float, float], float]]
    victims_remaining: Optional[int]  # None means ample
    rng: np.random.Generator
    dt: float
    safety_radius: float
    stall_ticks: int
    tick: int = 0
    rescued_total: int = 0
    conflicts: int = 0
    boards: List[RobotBoard] = field(default_factory=list, repr=False)
    tree: object = field(default=None, repr=False)
    registry: object = field(default=None, repr=False)
    trace: Optional[List[str]] = None
    victims_initial: Optional[int] = None

    @property
    def clock(self) -> float:
        return self.tick * self.dt

    def log(self, event: str, robot: int, **kv):
        if self.trace is not None:
            extra = " ".join(f"{k}={_fmt(v)}" for k, v in kv.items())
            self.trace.append(f"{self.tick:06d} t={self.clock:.1f} {event} robot={robot} {extra}".rstrip())

    def in_transit(self) -> int:
        return sum(r.load for r in self.robots)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


@dataclass(frozen=True)
class RobotMetrics:
    id: int
    cls: str
    rescued: int
    rounds: int
    energy_spent: float
    charges: int
    tackles: int
    distance: float


@dataclass(frozen=True)
class TrialMetrics:
    rescued_units: int
    total_energy_spent: float
    energy_per_unit: Optional[float]  # None when nothing was rescued
    rounds_completed: int
    conflicts: int
    per_robot: Tuple[RobotMetrics, ...] = ()


def _ticks(seconds: float, dt: float) -> int:
    return int(round(seconds / dt))


def _place_obstacles(sc, geo: Geometry, rng) -> list:
    ob = sc.obstacles
    out = []
    lo, hi = ob.margin, geo.length - ob.margin
    if ob.n and hi <= lo:
        raise ValueError("obstacle band is empty: margin leaves no room between the sites")
    clear = ob.radius + sc.arrival_radius
    attempts = 0
    while len(out) < ob.n:
        attempts += 1
        if attempts > 1000 * ob.n:
            raise ValueError("could not place obstacles clear of the sites")
        u = rng.uniform(lo, hi)
        v = rng.uniform(-ob.half_width, ob.half_width)
        p = geo.at(u, v)
        if any(dist(p, s) < clear for s in (geo.shelter, geo.site, geo.charger)):
            continue
        out.append((p, ob.radius))
    return out


def build_world(scenario, seed: int, trace: bool = False) -> WorldState:
    """Place sites, obstacles and robots for one trial of ``scenario``."""
    from ..harness.scenario import validate
    validate(scenario)
    sc = scenario
    geo = Geometry(sc.shelter, sc.rescue, sc.charger, sc.lane_offset, sc.arrival_radius)
    rng = np.random.default_rng(seed)
    obstacles = _place_obstacles(sc, geo, rng)

    team_sees_all = any(sc.spec(c).count and math.isinf(sc.spec(c).sense_range)
                        for c in RobotClass)
    spacing = max(1.0, sc.safety_radius + 2 * sc.spawn_jitter + 0.1)
    route, goal = geo.outbound()
    robots = []
    slot = {"ground": 0, "air": 0}
    for cls in RobotClass:
        spec = sc.spec(cls)
        v = spec.velocity * (spec.coop_velocity_factor if sc.cooperation else 1.0)
        knows = math.isinf(spec.sense_range) or (sc.cooperation and team_sees_all)
        for _ in range(spec.count):
            k = slot[spec.layer]
            slot[spec.layer] += 1
            jx, jy = rng.uniform(-sc.spawn_jitter, sc.spawn_jitter, 2)
            base = geo.at(-k * spacing, sc.lane_offset)
            r = RobotState(
                id=len(robots), cls=cls, position=(base[0] + jx, base[1] + jy),
                velocity=v, energy=100.0, per_step_energy=spec.per_step_energy,
                capacity=spec.capacity, sense_range=spec.sense_range, layer=spec.layer,
                charge_threshold=spec.charge_threshold,
                charge_ticks=_ticks(spec.charge_duration, sc.dt_s),
                knows_obstacles=knows,
            )
            r.set_task(Phase.TO_SITE, route, goal)
            robots.append(r)

    world = WorldState(
        scenario=sc, geometry=geo, robots=robots, obstacles=obstacles,
        victims_remaining=sc.victims, rng=rng, dt=sc.dt_s,
        safety_radius=sc.safety_radius, stall_ticks=sc.stall_ticks,
        trace=[] if trace else None, victims_initial=sc.victims,
    )
    world.tree = default_tree()
    world.registry = default_registry()
    world.boards = [RobotBoard(robot_id=r.id, capacity=r.capacity, robot=r, world=world)
                    for r in robots]
    return world


def _arrive(world: WorldState, r: RobotState):
    sc = world.scenario
    if r.phase is Phase.TO_SITE:
        r.set_task(Phase.RESCUING)
        r.timer = _ticks(sc.rescue_time_s, world.dt)
    elif r.phase is Phase.TO_SHELTER:
        r.set_task(Phase.UNLOADING)
    elif r.phase is Phase.TO_CHARGE:
        r.set_task(Phase.CHARGING)
        r.timer = r.charge_ticks
        world.log("charge", r.id, state="start", energy=r.energy)


def _finish_rescue(world: WorldState, r: RobotState):
    left = world.victims_remaining
    take = r.capacity if left is None else min(r.capacity, left)
    if left is not None:
        world.victims_remaining = left - take
    if take == 0:
        r.set_task(Phase.IDLE)
        return
    r.load = take
    world.log("rescue", r.id, units=take)
    route, goal = world.geometry.inbound()
    r.set_task(Phase.TO_SHELTER, route, goal)


def _finish_charge(world: WorldState, r: RobotState):
    r.energy = 100.0
    r.charges += 1
    world.log("charge", r.id, state="done", energy=r.energy)
    route, goal = world.geometry.resume(r.load > 0)
    r.set_task(Phase.TO_SHELTER if r.load else Phase.TO_SITE, route, goal)


def _unload(world: WorldState, r: RobotState):
    if r.load:
        world.rescued_total += r.load
        r.rescued += r.load
        r.rounds += 1
        world.log("unload", r.id, units=r.load, total=world.rescued_total)
        r.load = 0
    if world.victims_remaining == 0:
        r.set_task(Phase.IDLE)
    else:
        route, goal = world.geometry.outbound()
        r.set_task(Phase.TO_SITE, route, goal)


def _tackle_check(world: WorldState, r: RobotState):
    sc = world.scenario
    px, py = r.position
    now = set()
    for j, ((ox, oy), rad) in enumerate(world.obstacles):
        if (px - ox) ** 2 + (py - oy) ** 2 < rad * rad:
            now.add(j)
            if j not in r.inside:
                cost = min(sc.obstacles.e_c, r.energy)
                r.energy -= cost
                r.energy_spent += cost
                r.delay = _ticks(sc.obstacles.t_c, world.dt)
                r.tackles += 1
                world.log("tackle", r.id, obstacle=j, energy=r.energy)
    r.inside = now


def step(world: WorldState, dt: float = None) -> WorldState:
    """Advance the world by one tick of its fixed ``dt``."""
    if dt is not None and dt != world.dt:
        if not dt > 0:
            raise ValueError(f"dt must be > 0, got {dt!r}")
        raise ValueError(f"world runs at a fixed dt of {world.dt}, got {dt}")

    # phase 1: every robot decides against the same snapshot
    intents: List[Intent] = []
    for board in world.boards:
        tick_tree(world.tree, board, world.registry)
        intents.append(board.intent)

    # phase 2: negotiate movement, then apply
    moves = []
    for r, it in zip(world.robots, intents):
        if it is not None and it.kind == "move":
            if it.phase is not None:
                route, goal = it.route
                r.set_task(it.phase, route, goal)
            end = r.position
            if r.energy > 0 and it.target is not None:
                end = step_toward(r.position, it.target, r.velocity * world.dt)
            moves.append(MoveIntent(r.id, r.energy, r.position, end, r.layer))
        else:
            moves.append(MoveIntent(r.id, r.energy, r.position, r.position, r.layer))
    lost = [] if world.trace is not None else None
    resolved = negotiate_conflicts(moves, world.safety_radius, world.geometry.in_zone, lost)
    for m, res in zip(moves, resolved):
        if m.moving and not res.moving:
            world.conflicts += 1
    if lost:
        for winner, loser in lost:
            world.log("conflict", loser, winner=winner)

    sc = world.scenario
    for r, it, m, res in zip(world.robots, intents, moves, resolved):
        kind = None if it is None else it.kind
        if kind == "move":
            if m.moving and not res.moving:
                r.held += 1
                continue
            r.held = 0
            if res.moving:
                d = dist(r.position, res.end)
                cost = min(r.per_step_energy * d / sc.energy_step, r.energy)
                r.energy -= cost
                r.energy_spent += cost
                r.distance += d
                r.position = res.end
                world.log("move", r.id, x=r.position[0], y=r.position[1], energy=r.energy)
                if r.layer == "ground" and not r.knows_obstacles and world.obstacles:
                    _tackle_check(world, r)
            elif r.energy <= 0:
                continue
            while r.wp < len(r.route) and r.position == r.route[r.wp]:
                r.wp += 1
            if r.goal is not None and (r.wp >= len(r.route) or (
                    r.wp == len(r.route) - 1
                    and dist(r.position, r.goal) <= world.geometry.arrival_radius)):
                _arrive(world, r)
        elif kind == "hold":
            if r.delay > 0:
                r.delay -= 1
        elif kind == "work":
            r.timer -= 1
            if r.timer <= 0:
                _finish_rescue(world, r)
        elif kind == "unload":
            _unload(world, r)
        elif kind == "charge":
            r.timer -= 1
            if r.timer <= 0:
                _finish_charge(world, r)
    world.tick += 1
    return world


def metrics(world: WorldState) -> TrialMetrics:
    per = tuple(RobotMetrics(r.id, r.cls.value, r.rescued, r.rounds, r.energy_spent,
                             r.charges, r.tackles, r.distance) for r in world.robots)
    spent = math.fsum(r.energy_spent for r in world.robots)
    units = world.rescued_total
    return TrialMetrics(
        rescued_units=units,
        total_energy_spent=spent,
        energy_per_unit=spent / units if units else None,
        rounds_completed=sum(r.rounds for r in world.robots),
        conflicts=world.conflicts,
        per_robot=per,
    )


def run_trial(scenario, seed: int, trace: Optional[list] = None) -> TrialMetrics:
    """Run one full mission; appends trace lines to ``trace`` if given."""
    world = build_world(scenario, seed, trace=trace is not None)
    n = _ticks(scenario.duration_s, scenario.dt_s)
    for _ in range(n):
        step(world)
    if trace is not None:
        trace.extend(world.trace)
    return metrics(world)
