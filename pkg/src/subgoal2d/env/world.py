"""Kinematic 2D tabletop world: state types, transition, success predicates.

States are immutable value objects; ``step`` returns a fresh state and never
mutates its input, so replays are bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .tasks import REGION_NAMES, TaskSpec

A_MAX = 0.05  # per-component action bound, workspace units / step
GRASP_EPS = 0.04  # gripper-to-object-center distance that allows a grasp
GRIP_CLOSE_THRESHOLD = 0.5

# Named region boxes for move_to_region, (x0, y0, x1, y1); y grows downward
# (matches image row order).  Boxes are closed: boundaries count as inside.
REGIONS = {
    "left": (0.0, 0.0, 0.25, 1.0),
    "right": (0.75, 0.0, 1.0, 1.0),
    "top": (0.0, 0.0, 1.0, 0.25),
    "bottom": (0.0, 0.75, 1.0, 1.0),
    "center": (0.375, 0.375, 0.625, 0.625),
}
assert set(REGIONS) == set(REGION_NAMES)


class TaskNotApplicableError(ValueError):
    """The task's slots do not resolve to a unique entity in this state."""


@dataclass(frozen=True)
class ObjectState:
    pos: tuple[float, float]
    shape: str
    color: str


@dataclass(frozen=True)
class ContainerState:
    rect: tuple[float, float, float, float]  # x0, y0, x1, y1
    kind: str
    color: str

    @property
    def center(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.rect
        return ((x0 + x1) / 2.0, (y0 + y1) / 2.0)


@dataclass(frozen=True)
class WorldState:
    gripper_pos: tuple[float, float]
    grip_closed: bool
    held_object: int | None
    objects: tuple[ObjectState, ...]
    containers: tuple[ContainerState, ...]


@dataclass(frozen=True)
class Action:
    delta: tuple[float, float]
    grip_cmd: float  # >= 0.5 means close

    @property
    def closes(self) -> bool:
        return self.grip_cmd >= GRIP_CLOSE_THRESHOLD


def _clip01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def _clip_delta(v: float) -> float:
    if not math.isfinite(v):
        return 0.0
    return -A_MAX if v < -A_MAX else A_MAX if v > A_MAX else v


def point_in_rect(p: tuple[float, float], rect: tuple[float, float, float, float]) -> bool:
    x0, y0, x1, y1 = rect
    return x0 <= p[0] <= x1 and y0 <= p[1] <= y1


def step(state: WorldState, action: Action) -> WorldState:
    """Advance the world by one action.  Degenerate inputs are clipped."""
    gx = _clip01(state.gripper_pos[0] + _clip_delta(action.delta[0]))
    gy = _clip01(state.gripper_pos[1] + _clip_delta(action.delta[1]))
    gpos = (gx, gy)

    held = state.held_object
    objects = list(state.objects)
    if held is not None:
        objects[held] = replace(objects[held], pos=gpos)

    closes = action.closes
    if closes and not state.grip_closed:
        if held is None:
            best, best_d = None, GRASP_EPS
            for idx, obj in enumerate(objects):
                d = math.hypot(obj.pos[0] - gx, obj.pos[1] - gy)
                if d <= best_d:
                    best, best_d = idx, d
            if best is not None:
                held = best
                objects[held] = replace(objects[held], pos=gpos)
    elif not closes and state.grip_closed:
        held = None  # release in place

    return WorldState(
        gripper_pos=gpos,
        grip_closed=closes,
        held_object=held,
        objects=tuple(objects),
        containers=state.containers,
    )


def resolve_object(state: WorldState, task: TaskSpec) -> int:
    matches = [
        i
        for i, o in enumerate(state.objects)
        if o.color == task.object_color and o.shape == task.object_shape
    ]
    if len(matches) != 1:
        raise TaskNotApplicableError(
            f"task {task.text!r}: {len(matches)} objects match "
            f"({task.object_color}, {task.object_shape})"
        )
    return matches[0]


def resolve_target_rect(state: WorldState, task: TaskSpec) -> tuple[float, float, float, float]:
    if task.template == "move_to_region":
        return REGIONS[task.target_kind]
    matches = [
        c
        for c in state.containers
        if c.kind == task.target_kind and c.color == task.target_color
    ]
    if len(matches) != 1:
        raise TaskNotApplicableError(
            f"task {task.text!r}: {len(matches)} containers match "
            f"({task.target_color}, {task.target_kind})"
        )
    return matches[0].rect


def success(state: WorldState, task: TaskSpec) -> bool:
    """True iff the referenced object rests inside the target box, not held."""
    obj_idx = resolve_object(state, task)
    rect = resolve_target_rect(state, task)
    if state.held_object == obj_idx:
        return False
    return point_in_rect(state.objects[obj_idx].pos, rect)


def validate_state(state: WorldState) -> None:
    """Assert the documented state invariants (used in tests / debugging)."""
    for name, v in (("gripper", state.gripper_pos),):
        assert 0.0 <= v[0] <= 1.0 and 0.0 <= v[1] <= 1.0, f"{name} out of bounds: {v}"
    for o in state.objects:
        assert 0.0 <= o.pos[0] <= 1.0 and 0.0 <= o.pos[1] <= 1.0, f"object out of bounds: {o}"
    if state.held_object is not None:
        assert 0 <= state.held_object < len(state.objects)
        assert state.objects[state.held_object].pos == state.gripper_pos
    boxes = [c.rect for c in state.containers]
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            a, b = boxes[i], boxes[j]
            overlap = a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]
            assert not overlap, f"containers overlap: {a} {b}"
