"""Condition and action leaves binding the needs tree to the rescue world.

Every leaf reads the robot's :class:`RobotBoard`; actions only write the
board (intent, outbox, memory).  The world applies intents afterwards, so a
tick never mutates shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from ..needs_bt import Blackboard, NeedsTreeConfig, NodeStatus, Registry, build_needs_tree
from .state import Geometry, Intent, Phase, RobotState

SUCCESS = NodeStatus.SUCCESS
FAILURE = NodeStatus.FAILURE
RUNNING = NodeStatus.RUNNING


@dataclass
class RobotBoard(Blackboard):
    robot: RobotState = None
    world: Any = None


def perceive(b: RobotBoard):
    r, w = b.robot, b.world
    b.position = r.position
    b.energy = r.energy
    b.load = r.load
    b.capacity = r.capacity
    b.task = r.phase.value
    b.clock = w.clock
    b.outbox.clear()
    rng2 = r.sense_range * r.sense_range if math.isfinite(r.sense_range) else math.inf
    safe2 = w.safety_radius * w.safety_radius
    px, py = r.position
    mine_free = not w.geometry.in_zone(r.position)
    neighbors = []
    imminent = False
    for o in w.robots:
        if o is r:
            continue
        dx = o.position[0] - px
        dy = o.position[1] - py
        d2 = dx * dx + dy * dy
        if d2 <= rng2:
            neighbors.append(o.id)
        if (mine_free and d2 < safe2 and o.layer == r.layer
                and not w.geometry.in_zone(o.position)):
            imminent = True
    b.neighbors = neighbors
    b.obstacles = w.obstacles if r.knows_obstacles else []
    b.imminent_collision = imminent
    return SUCCESS


def no_imminent_collision(b: RobotBoard) -> bool:
    return not b.imminent_collision and b.robot.delay == 0


def evade(b: RobotBoard):
    """Hold while tackling an obstacle, otherwise back away from the nearest robot."""
    r, w = b.robot, b.world
    if r.delay > 0:
        b.intent = Intent("hold")
        return RUNNING
    nearest, best = None, math.inf
    for o in w.robots:
        if o is not r and o.layer == r.layer:
            d = math.dist(o.position, r.position)
            if d < best:
                nearest, best = o, d
    if nearest is None or best == 0:
        b.intent = Intent("hold")
        return RUNNING
    away = (2 * r.position[0] - nearest.position[0], 2 * r.position[1] - nearest.position[1])
    b.intent = Intent("move", away)
    return RUNNING


def energy_ok(b: RobotBoard) -> bool:
    r = b.robot
    return r.energy >= r.charge_threshold and r.phase not in (Phase.TO_CHARGE, Phase.CHARGING)


def go_charge(b: RobotBoard):
    r, w = b.robot, b.world
    if r.phase is Phase.CHARGING:
        b.intent = Intent("charge")
    elif r.phase is Phase.TO_CHARGE:
        b.intent = Intent("move", _target(r, w))
    else:
        route, goal = w.geometry.to_charger(r.position)
        b.intent = Intent("move", route[0], Phase.TO_CHARGE, (route, goal))
    return RUNNING


def task_within_capability(b: RobotBoard) -> bool:
    return b.robot.capacity > 0


def request_reassignment(b: RobotBoard):
    b.outbox.append(("reassign", b.robot.id))
    b.intent = Intent("idle")
    return RUNNING


def utility(b: RobotBoard):
    """Expected units this round; fails once there is nothing left to do."""
    r, w = b.robot, b.world
    if r.phase is Phase.IDLE:
        return FAILURE
    left = math.inf if w.victims_remaining is None else w.victims_remaining
    if left == 0 and r.load == 0:
        return FAILURE
    b.memory["utility"] = r.load if r.load else min(r.capacity, left)
    return SUCCESS


def _target(r: RobotState, w):
    i = r.wp
    while i < len(r.route) and r.route[i] == r.position:
        i += 1
    if i == len(r.route):
        return None
    wp = r.route[i]
    if r.held >= w.stall_ticks:
        return Geometry.sidestep(r.position, wp, w.safety_radius)
    return wp


def plan(b: RobotBoard):
    r = b.robot
    if r.phase in (Phase.RESCUING, Phase.UNLOADING):
        b.memory["target"] = None
    else:
        b.memory["target"] = _target(r, b.world)
    return SUCCESS


def negotiate(b: RobotBoard):
    target = b.memory.get("target")
    if target is not None:
        b.outbox.append(("propose", b.robot.id, target))
    return SUCCESS


def execute(b: RobotBoard):
    phase = b.robot.phase
    if phase is Phase.RESCUING:
        b.intent = Intent("work")
    elif phase is Phase.UNLOADING:
        b.intent = Intent("unload")
    elif b.memory.get("target") is not None:
        b.intent = Intent("move", b.memory["target"])
    else:
        b.intent = Intent("hold")
    return SUCCESS


DEFAULT_CONFIG = NeedsTreeConfig(
    perception="perceive",
    safety=("no_imminent_collision", "evade"),
    basic=("energy_ok", "go_charge"),
    capability=("task_within_capability", "request_reassignment"),
    utility="utility",
    plan="plan",
    negotiation="negotiate",
    execution="execute",
)

# Actions that may set an intent; at most one of them runs in any tick.
INTENT_ACTIONS = ("evade", "go_charge", "request_reassignment", "execute")


def default_registry() -> Registry:
    return Registry(
        conditions={
            "no_imminent_collision": no_imminent_collision,
            "energy_ok": energy_ok,
            "task_within_capability": task_within_capability,
        },
        actions={
            "perceive": perceive,
            "evade": evade,
            "go_charge": go_charge,
            "request_reassignment": request_reassignment,
            "utility": utility,
            "plan": plan,
            "negotiate": negotiate,
            "execute": execute,
        },
    )


def default_tree():
    return build_needs_tree(DEFAULT_CONFIG)
