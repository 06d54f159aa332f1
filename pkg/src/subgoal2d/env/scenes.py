"""Procedural scene + task sampling with a train/heldout attribute split."""

from __future__ import annotations

import numpy as np

from .tasks import (
    COLORS,
    CONTAINER_KINDS,
    REGION_NAMES,
    RESERVED_COMBOS,
    TRAIN_COMBOS,
    TaskSpec,
)
from .world import (
    REGIONS,
    ContainerState,
    ObjectState,
    WorldState,
    point_in_rect,
    success,
)

SPLITS = ("train", "heldout")

_OBJ_MARGIN = 0.12  # min distance between object centers
_CONT_CLEAR = 0.05  # objects start at least this far outside container rects


def _shapes_for_color(color: str, split: str) -> list[str]:
    if split == "train":
        return [s for (c, s) in TRAIN_COMBOS if c == color]
    return [s for (c, s) in RESERVED_COMBOS if c == color]


def _sample_containers(rng: np.random.Generator, n: int) -> list[ContainerState]:
    pairs = [(k, c) for k in CONTAINER_KINDS for c in COLORS]
    idx = rng.choice(len(pairs), size=n, replace=False)
    containers: list[ContainerState] = []
    for i in idx:
        kind, color = pairs[i]
        for _ in range(200):
            hx = rng.uniform(0.07, 0.10)
            hy = rng.uniform(0.07, 0.10)
            cx = rng.uniform(0.12, 0.88)
            cy = rng.uniform(0.12, 0.88)
            rect = (cx - hx, cy - hy, cx + hx, cy + hy)
            clear = all(
                rect[2] + 0.02 < o.rect[0]
                or o.rect[2] + 0.02 < rect[0]
                or rect[3] + 0.02 < o.rect[1]
                or o.rect[3] + 0.02 < rect[1]
                for o in containers
            )
            if clear:
                containers.append(ContainerState(rect=rect, kind=kind, color=color))
                break
        else:
            raise RuntimeError("container placement failed")
    return containers


def _place_objects(
    rng: np.random.Generator,
    combos: list[tuple[str, str]],
    containers: list[ContainerState],
) -> list[ObjectState]:
    objects: list[ObjectState] = []
    for color, shape in combos:
        for _ in range(500):
            x = rng.uniform(0.06, 0.94)
            y = rng.uniform(0.06, 0.94)
            if any(
                abs(x - o.pos[0]) < _OBJ_MARGIN and abs(y - o.pos[1]) < _OBJ_MARGIN
                for o in objects
            ):
                continue
            inside = False
            for c in containers:
                x0, y0, x1, y1 = c.rect
                if (
                    x0 - _CONT_CLEAR <= x <= x1 + _CONT_CLEAR
                    and y0 - _CONT_CLEAR <= y <= y1 + _CONT_CLEAR
                ):
                    inside = True
                    break
            if not inside:
                objects.append(ObjectState(pos=(x, y), shape=shape, color=color))
                break
        else:
            raise RuntimeError("object placement failed")
    return objects


def _sample_combos(rng: np.random.Generator, n: int, split: str) -> list[tuple[str, str]]:
    """Distinct-color combos; heldout puts one reserved combo first."""
    if split == "train":
        colors = [COLORS[i] for i in rng.choice(len(COLORS), size=n, replace=False)]
        return [(c, _shapes_for_color(c, "train")[rng.integers(0, len(_shapes_for_color(c, "train")))]) for c in colors]
    reserved = RESERVED_COMBOS[rng.integers(0, len(RESERVED_COMBOS))]
    other_colors = [c for c in COLORS if c != reserved[0]]
    picks = [other_colors[i] for i in rng.choice(len(other_colors), size=n - 1, replace=False)]
    combos = [reserved]
    for c in picks:
        shapes = _shapes_for_color(c, "train")
        combos.append((c, shapes[rng.integers(0, len(shapes))]))
    return combos


def _regions_excluding(pos: tuple[float, float]) -> list[str]:
    return [r for r in REGION_NAMES if not point_in_rect(pos, REGIONS[r])]


def sample_scene(
    split: str, rng: np.random.Generator
) -> tuple[WorldState, TaskSpec]:
    """Random solvable layout plus an applicable, not-yet-satisfied task."""
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}")
    n_obj = int(rng.integers(2, 4))
    n_cont = int(rng.integers(1, 3))
    containers = _sample_containers(rng, n_cont)
    combos = _sample_combos(rng, n_obj, split)
    objects = _place_objects(rng, combos, containers)
    gripper = (float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.1, 0.9)))
    state = WorldState(
        gripper_pos=gripper,
        grip_closed=False,
        held_object=None,
        objects=tuple(objects),
        containers=tuple(containers),
    )
    # Heldout tasks always reference the reserved combo (objects[0]).
    tgt_obj = objects[0] if split == "heldout" else objects[rng.integers(0, n_obj)]
    if rng.random() < 0.7:
        cont = containers[rng.integers(0, n_cont)]
        task = TaskSpec("put_in", tgt_obj.color, tgt_obj.shape, cont.kind, cont.color)
    else:
        options = _regions_excluding(tgt_obj.pos)
        region = options[rng.integers(0, len(options))]
        task = TaskSpec("move_to_region", tgt_obj.color, tgt_obj.shape, region)
    assert not success(state, task)
    return state, task


def sample_scene_for_task(
    task: TaskSpec, rng: np.random.Generator, n_distractors: int = 2
) -> WorldState:
    """Layout guaranteed to make the given task applicable and unsolved."""
    n_cont = 2
    containers = _sample_containers(rng, n_cont)
    if task.template == "put_in":
        # force the referenced container to exist (replace the first draw)
        containers[0] = ContainerState(
            rect=containers[0].rect, kind=task.target_kind, color=task.target_color
        )
        if (
            containers[1].kind == task.target_kind
            and containers[1].color == task.target_color
        ):
            alt_color = next(c for c in COLORS if c != task.target_color)
            containers[1] = ContainerState(
                rect=containers[1].rect, kind=containers[1].kind, color=alt_color
            )
    combos = [task.object_combo]
    other_colors = [c for c in COLORS if c != task.object_color]
    picks = rng.choice(len(other_colors), size=n_distractors, replace=False)
    for i in picks:
        color = other_colors[i]
        shapes = _shapes_for_color(color, "train")
        combos.append((color, shapes[rng.integers(0, len(shapes))]))
    objects = _place_objects(rng, combos, containers)
    if task.template == "move_to_region":
        # resample the target object until it starts outside the region
        region = REGIONS[task.target_kind]
        for _ in range(200):
            if not point_in_rect(objects[0].pos, region):
                break
            objects = _place_objects(rng, combos, containers)
        assert not point_in_rect(objects[0].pos, region)
    gripper = (float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.1, 0.9)))
    state = WorldState(
        gripper_pos=gripper,
        grip_closed=False,
        held_object=None,
        objects=tuple(objects),
        containers=tuple(containers),
    )
    assert not success(state, task)
    return state


def make_goal_state(state: WorldState, task: TaskSpec) -> WorldState:
    """Privileged completed-task state: object placed, gripper parked on it."""
    from .world import resolve_object, resolve_target_rect

    obj_idx = resolve_object(state, task)
    rect = resolve_target_rect(state, task)
    center = ((rect[0] + rect[2]) / 2.0, (rect[1] + rect[3]) / 2.0)
    objects = list(state.objects)
    objects[obj_idx] = ObjectState(pos=center, shape=objects[obj_idx].shape, color=objects[obj_idx].color)
    return WorldState(
        gripper_pos=center,
        grip_closed=False,
        held_object=None,
        objects=tuple(objects),
        containers=state.containers,
    )


def validate_chain(state: WorldState, chain: list[TaskSpec]) -> bool:
    """Static affordance check: distinct objects, all resolvable, none solved."""
    from .world import resolve_object

    seen: set[int] = set()
    for task in chain:
        try:
            idx = resolve_object(state, task)
            if task.template == "put_in":
                from .world import resolve_target_rect

                resolve_target_rect(state, task)
            if success(state, task):
                return False
        except Exception:
            return False
        if idx in seen:
            return False
        seen.add(idx)
    return True


def sample_chain(
    rng: np.random.Generator, split: str = "train", length: int = 5
) -> tuple[WorldState, list[TaskSpec]]:
    """Scene plus `length` tasks over distinct objects (affordance-checked)."""
    containers = _sample_containers(rng, 2)
    combos = _sample_combos(rng, length, split)
    objects = _place_objects(rng, combos, containers)
    gripper = (float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.1, 0.9)))
    state = WorldState(
        gripper_pos=gripper,
        grip_closed=False,
        held_object=None,
        objects=tuple(objects),
        containers=tuple(containers),
    )
    chain: list[TaskSpec] = []
    for i, obj in enumerate(objects):
        if i % 2 == 0:
            cont = containers[(i // 2) % len(containers)]
            chain.append(TaskSpec("put_in", obj.color, obj.shape, cont.kind, cont.color))
        else:
            options = _regions_excluding(obj.pos)
            region = options[rng.integers(0, len(options))]
            chain.append(TaskSpec("move_to_region", obj.color, obj.shape, region))
    if not validate_chain(state, chain):
        # extremely rare (placement guarantees applicability); resample
        return sample_chain(rng, split, length)
    return state, chain
