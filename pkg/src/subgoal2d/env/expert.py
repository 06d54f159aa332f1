"""Scripted waypoint expert: approach -> grasp -> carry -> release.

Per-step uniform noise on the motion keeps demonstrations diverse without
breaking the success guarantee.  Once the task has succeeded the expert emits
exact zero-delta actions, which gives every trajectory a terminal "stay"
segment.
"""

from __future__ import annotations

import numpy as np

from .tasks import TaskSpec
from .world import (
    A_MAX,
    REGIONS,
    Action,
    WorldState,
    resolve_object,
    resolve_target_rect,
    step,
    success,
)

NOISE = 0.005  # uniform action noise, 10% of A_MAX
GRASP_STEP_TOL = 0.04  # may close the grip when both components are this near
PLACE_TOL = 0.015
MAX_EXPERT_STEPS = 120
SETTLE_STEPS = 3


def _rect_center(rect) -> tuple[float, float]:
    return ((rect[0] + rect[2]) / 2.0, (rect[1] + rect[3]) / 2.0)


def _clip(v: float) -> float:
    return -A_MAX if v < -A_MAX else A_MAX if v > A_MAX else v


def scripted_expert(state: WorldState, task: TaskSpec, rng: np.random.Generator) -> Action:
    """One expert action for the current state (stateless waypoint policy)."""
    if success(state, task):
        return Action((0.0, 0.0), 0.0)

    obj_idx = resolve_object(state, task)
    gx, gy = state.gripper_pos
    nx, ny = rng.uniform(-NOISE, NOISE, size=2)

    if state.held_object == obj_idx:
        tx, ty = _rect_center(resolve_target_rect(state, task))
        dx, dy = tx - gx, ty - gy
        if abs(dx) <= PLACE_TOL and abs(dy) <= PLACE_TOL:
            return Action((dx + nx, dy + ny), 0.0)  # settle and release
        return Action((_clip(dx) + nx, _clip(dy) + ny), 1.0)

    if state.grip_closed:
        # Holding nothing (or the wrong object): open and retry.
        return Action((nx, ny), 0.0)

    ox, oy = state.objects[obj_idx].pos
    dx, dy = ox - gx, oy - gy
    if abs(dx) <= GRASP_STEP_TOL and abs(dy) <= GRASP_STEP_TOL:
        return Action((dx + nx, dy + ny), 1.0)  # land on the object and close
    return Action((_clip(dx) + nx, _clip(dy) + ny), 0.0)


def rollout_expert(
    state: WorldState,
    task: TaskSpec,
    rng: np.random.Generator,
    max_steps: int = MAX_EXPERT_STEPS,
    settle_steps: int = SETTLE_STEPS,
) -> tuple[list[WorldState], list[Action], bool]:
    """Run the expert until success (plus a short stay tail).

    Returns (states, actions, succeeded); len(states) == len(actions) + 1.
    """
    states = [state]
    actions: list[Action] = []
    succeeded = False
    for _ in range(max_steps):
        if success(states[-1], task):
            succeeded = True
            break
        a = scripted_expert(states[-1], task, rng)
        actions.append(a)
        states.append(step(states[-1], a))
    else:
        succeeded = success(states[-1], task)
    if succeeded:
        for _ in range(settle_steps):
            a = scripted_expert(states[-1], task, rng)
            actions.append(a)
            states.append(step(states[-1], a))
    return states, actions, succeeded


def region_center(name: str) -> tuple[float, float]:
    return _rect_center(REGIONS[name])
