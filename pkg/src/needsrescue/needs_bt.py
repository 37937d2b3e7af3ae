"""Minimal behaviour-tree engine and the needs-hierarchy tree builder.

Trees are re-ticked from the root every cycle; there is no running-child
memory, so any state an action needs across cycles lives on the blackboard.
Condition and action leaves are bound by name and resolved against a
:class:`Registry` at tick time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

log = logging.getLogger(__name__)


class NodeStatus(Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    RUNNING = "running"


class Node:
    kind = "node"

    def __init__(self, name: str, children=()):
        self.name = name
        self.children = list(children)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class Selector(Node):
    kind = "selector"

    def __init__(self, name, children):
        super().__init__(name, children)
        if not self.children:
            raise ValueError(f"selector {name!r} needs at least one child")


class Sequence(Node):
    kind = "sequence"

    def __init__(self, name, children):
        super().__init__(name, children)
        if not self.children:
            raise ValueError(f"sequence {name!r} needs at least one child")


class Condition(Node):
    kind = "condition"

    def __init__(self, key: str, name: str = None):
        super().__init__(name or key)
        self.key = key


class Action(Node):
    kind = "action"

    def __init__(self, key: str, name: str = None):
        super().__init__(name or key)
        self.key = key


class Placeholder(Node):
    """Inert leaf that always succeeds (reserved need level)."""

    kind = "placeholder"


@dataclass
class Registry:
    conditions: Dict[str, Callable[[Any], bool]] = field(default_factory=dict)
    actions: Dict[str, Callable[[Any], NodeStatus]] = field(default_factory=dict)


@dataclass
class Blackboard:
    """Per-robot working memory read by conditions and written by actions.

    ``ticked`` and ``executed`` record which leaves were visited and which
    actions ran during the most recent :func:`tick_tree` call.
    """

    robot_id: int = 0
    position: Tuple[float, float] = (0.0, 0.0)
    energy: float = 100.0
    load: int = 0
    capacity: int = 1
    task: Optional[str] = None
    neighbors: list = field(default_factory=list)
    obstacles: list = field(default_factory=list)
    imminent_collision: bool = False
    clock: float = 0.0
    inbox: list = field(default_factory=list)
    outbox: list = field(default_factory=list)
    memory: dict = field(default_factory=dict)
    intent: Any = None
    ticked: List[str] = field(default_factory=list)
    executed: List[str] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)

    def check(self):
        if not 0.0 <= self.energy <= 100.0:
            raise ValueError(f"energy {self.energy} outside [0, 100]")
        if not 0 <= self.load <= self.capacity:
            raise ValueError(f"load {self.load} outside [0, {self.capacity}]")


def tick(node: Node, board: Blackboard, registry: Registry) -> NodeStatus:
    if isinstance(node, Sequence):
        for child in node.children:
            status = tick(child, board, registry)
            if status is not NodeStatus.SUCCESS:
                return status
        return NodeStatus.SUCCESS
    if isinstance(node, Selector):
        for child in node.children:
            status = tick(child, board, registry)
            if status is not NodeStatus.FAILURE:
                return status
        return NodeStatus.FAILURE
    if isinstance(node, Condition):
        board.ticked.append(node.key)
        pred = registry.conditions.get(node.key)
        if pred is None:
            return _unknown(board, "condition", node.key)
        return NodeStatus.SUCCESS if pred(board) else NodeStatus.FAILURE
    if isinstance(node, Action):
        board.ticked.append(node.key)
        fn = registry.actions.get(node.key)
        if fn is None:
            return _unknown(board, "action", node.key)
        board.executed.append(node.key)
        return fn(board)
    if isinstance(node, Placeholder):
        board.ticked.append(node.name)
        return NodeStatus.SUCCESS
    raise TypeError(f"not a behaviour-tree node: {node!r}")


def _unknown(board, what, key):
    msg = f"unknown {what} {key!r}"
    board.diagnostics.append(msg)
    log.warning(msg)
    return NodeStatus.FAILURE


def tick_tree(root: Node, board: Blackboard, registry: Registry) -> NodeStatus:
    """Tick from the root after clearing the per-tick trace."""
    board.ticked.clear()
    board.executed.clear()
    board.intent = None
    return tick(root, board, registry)


def count_nodes(node: Node) -> int:
    return 1 + sum(count_nodes(c) for c in node.children)


def render_tree(node: Node, indent: int = 0) -> str:
    """Indented text dump; composites show ``?`` (selector) or ``->`` (sequence)."""
    marker = {"selector": "[?]", "sequence": "[->]"}.get(node.kind, f"<{node.kind}>")
    label = node.name
    if isinstance(node, (Condition, Action)) and node.key != node.name:
        label = f"{node.name} = {node.key}"
    lines = ["  " * indent + f"{marker} {label}"]
    for child in node.children:
        lines.append(render_tree(child, indent + 1))
    return "\n".join(lines)


STAGES = ("perception", "safety", "basic", "capability", "utility", "plan",
          "negotiation", "execution")


@dataclass(frozen=True)
class NeedsTreeConfig:
    """Registry keys for every stage of the needs tree.

    The three need stages take a ``(condition, action)`` pair; the others take
    a single action key.
    """

    perception: Optional[str] = None
    safety: Optional[Tuple[str, str]] = None
    basic: Optional[Tuple[str, str]] = None
    capability: Optional[Tuple[str, str]] = None
    utility: Optional[str] = None
    plan: Optional[str] = None
    negotiation: Optional[str] = None
    execution: Optional[str] = None

    def validate(self):
        missing = [s for s in STAGES if not getattr(self, s)]
        if missing:
            raise ValueError(f"needs-tree config is missing bindings for: {', '.join(missing)}")
        for s in ("safety", "basic", "capability"):
            pair = getattr(self, s)
            if len(pair) != 2 or not all(pair):
                raise ValueError(f"stage {s!r} needs a (condition, action) pair, got {pair!r}")


def build_needs_tree(config: NeedsTreeConfig) -> Node:
    """Root sequence over the needs in priority order.

    Perception first, then one selector per need (condition satisfied, or run
    the corrective action), then the teaming sequence, then the inert
    learning placeholder.  A need whose action is running blocks every later
    stage for that cycle.
    """
    config.validate()

    def need(label, pair):
        cond, act = pair
        return Selector(label, [Condition(cond, f"Con_{label}"), Action(act, f"Act_{label}")])

    teaming = Sequence("Teaming", [
        Action(config.utility, "U"),
        Action(config.plan, "Pl"),
        Action(config.negotiation, "Ne"),
        Action(config.execution, "A&E"),
    ])
    return Sequence("Needs", [
        Action(config.perception, "Pe"),
        need("Sa", config.safety),
        need("BN", config.basic),
        need("Ca", config.capability),
        teaming,
        Placeholder("Learning"),
    ])
