"""Priority negotiation over one tick's movement proposals."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Tuple

Point = Tuple[float, float]


@dataclass(frozen=True)
class MoveIntent:
    robot_id: int
    energy: float
    start: Point
    end: Point
    layer: str = "ground"

    @property
    def moving(self) -> bool:
        return self.start != self.end

    @property
    def priority(self):
        # more energy first, then lower id
        return (-self.energy, self.robot_id)

    def held(self) -> "MoveIntent":
        return replace(self, end=self.start)


def _close(a: Point, b: Point, r: float) -> bool:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy < r * r


def negotiate_conflicts(intents: List[MoveIntent], safety_radius: float,
                        exempt: Optional[Callable[[Point], bool]] = None,
                        conflicts: Optional[list] = None) -> List[MoveIntent]:
    """Resolve pairwise conflicts so the applied positions keep their distance.

    Two intents in the same layer conflict when their end points are closer
    than ``safety_radius`` (pairs where either end point satisfies ``exempt``
    are ignored).  Pairs are scanned in priority order; the lower-priority
    mover holds, or the higher-priority one does when the other is already
    stationary.  The scan restarts after every change until nothing moves.
    Pairs of stationary robots cannot be resolved and are left alone.

    Returns intents in the input order.  Resolved pairs are appended to
    ``conflicts`` as ``(winner_id, loser_id)`` when a list is given.
    """
    if not safety_radius > 0:
        raise ValueError(f"safety_radius must be > 0, got {safety_radius!r}")
    order = sorted(range(len(intents)), key=lambda i: intents[i].priority)
    cur = [intents[i] for i in order]
    ex = [bool(exempt and exempt(it.end)) for it in cur]
    changed = True
    while changed:
        changed = False
        for a in range(len(cur)):
            if ex[a]:
                continue
            for b in range(a + 1, len(cur)):
                ia, ib = cur[a], cur[b]
                if ex[b] or ia.layer != ib.layer or not _close(ia.end, ib.end, safety_radius):
                    continue
                if ib.moving:
                    loser, winner = b, a
                elif ia.moving:
                    loser, winner = a, b
                else:
                    continue
                cur[loser] = cur[loser].held()
                ex[loser] = bool(exempt and exempt(cur[loser].end))
                if conflicts is not None:
                    conflicts.append((cur[winner].robot_id, cur[loser].robot_id))
                changed = True
                break
            if changed:
                break
    out = [None] * len(cur)
    for pos, i in enumerate(order):
        out[i] = cur[pos]
    return out
