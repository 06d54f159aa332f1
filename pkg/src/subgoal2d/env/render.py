"""Deterministic observation rendering: anti-aliased sprites or state vectors.

Image observations are float32 arrays of shape (3, H, W) with values in
[-1, 1].  Shapes are rasterized from signed distance fields with a one-pixel
soft edge, so sub-pixel positions remain visible even at 16x16.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tasks import COLORS, CONTAINER_KINDS, SHAPES
from .world import ContainerState, ObjectState, WorldState

BACKGROUND = -1.0

COLOR_VECS = {
    "red": (1.0, -1.0, -1.0),
    "green": (-1.0, 1.0, -1.0),
    "blue": (-1.0, -1.0, 1.0),
    "yellow": (1.0, 1.0, -1.0),
    "purple": (1.0, -1.0, 1.0),
    "orange": (1.0, 0.1, -1.0),
}
assert set(COLOR_VECS) == set(COLORS)

GRIPPER_COLOR = (1.0, 1.0, 1.0)

# Object footprint half-extents (workspace units)
BLOCK_HALF = 0.035
DISC_RADIUS = 0.040
BAR_HALF = (0.055, 0.022)

# Gripper sprite geometry
ARM_OPEN = 0.055
ARM_CLOSED = 0.030
ARM_THICK = 0.013
RING_OPEN = 0.050
RING_CLOSED = 0.028
RING_THICK = 0.013

MAX_OBJECTS = 5
MAX_CONTAINERS = 3
STATE_VECTOR_DIM = 4 + MAX_OBJECTS * (4 + len(COLORS) + len(SHAPES)) + MAX_CONTAINERS * (
    5 + len(CONTAINER_KINDS) + len(COLORS)
)


@dataclass(frozen=True)
class RenderConfig:
    mode: str = "image"  # "image" | "state_vector"
    resolution: int = 16  # H = W, 16 or 32
    channels: int = 3
    embodiment_sprite: str = "robot"  # "robot" | "alt"

    def __post_init__(self):
        if self.mode not in ("image", "state_vector"):
            raise ValueError(f"unknown render mode {self.mode!r}")
        if self.resolution not in (16, 32):
            raise ValueError(f"resolution must be 16 or 32, got {self.resolution}")
        if self.channels != 3:
            raise ValueError("only 3-channel rendering is supported")
        if self.embodiment_sprite not in ("robot", "alt"):
            raise ValueError(f"unknown sprite {self.embodiment_sprite!r}")

    @property
    def obs_shape(self) -> tuple[int, ...]:
        if self.mode == "image":
            return (self.channels, self.resolution, self.resolution)
        return (STATE_VECTOR_DIM,)


def _grid(res: int) -> tuple[np.ndarray, np.ndarray]:
    centers = (np.arange(res, dtype=np.float64) + 0.5) / res
    return np.meshgrid(centers, centers, indexing="xy")  # px (x), py (y=row)


def _rect_sdf(px, py, cx, cy, hx, hy):
    dx = np.abs(px - cx) - hx
    dy = np.abs(py - cy) - hy
    outside = np.hypot(np.maximum(dx, 0.0), np.maximum(dy, 0.0))
    inside = np.minimum(np.maximum(dx, dy), 0.0)
    return outside + inside


def _disc_sdf(px, py, cx, cy, r):
    return np.hypot(px - cx, py - cy) - r


def _coverage(sdf: np.ndarray, pixel: float) -> np.ndarray:
    return np.clip(0.5 - sdf / pixel, 0.0, 1.0)


def _composite(img: np.ndarray, alpha: np.ndarray, color) -> None:
    col = np.asarray(color, dtype=np.float64)[:, None, None]
    img *= 1.0 - alpha[None]
    img += col * alpha[None]


def _object_alpha(px, py, pixel, obj: ObjectState) -> np.ndarray:
    x, y = obj.pos
    if obj.shape == "block":
        d = _rect_sdf(px, py, x, y, BLOCK_HALF, BLOCK_HALF)
    elif obj.shape == "disc":
        d = _disc_sdf(px, py, x, y, DISC_RADIUS)
    else:  # bar
        d = _rect_sdf(px, py, x, y, BAR_HALF[0], BAR_HALF[1])
    return _coverage(d, pixel)


def _container_alpha(px, py, pixel, cont: ContainerState) -> np.ndarray:
    x0, y0, x1, y1 = cont.rect
    cx, cy = cont.center
    hx, hy = (x1 - x0) / 2.0, (y1 - y0) / 2.0
    if cont.kind == "bowl":
        d = _disc_sdf(px, py, cx, cy, min(hx, hy))
        return _coverage(d, pixel)
    d = _rect_sdf(px, py, cx, cy, hx, hy)
    a = _coverage(d, pixel)
    if cont.kind == "plate":
        a = a * 0.55  # lighter wash distinguishes plates from pots
    return a


def _gripper_alpha(px, py, pixel, pos, closed: bool, sprite: str) -> np.ndarray:
    x, y = pos
    if sprite == "robot":
        arm = ARM_CLOSED if closed else ARM_OPEN
        d1 = _rect_sdf(px, py, x, y, arm, ARM_THICK)
        d2 = _rect_sdf(px, py, x, y, ARM_THICK, arm)
        return np.maximum(_coverage(d1, pixel), _coverage(d2, pixel))
    r = RING_CLOSED if closed else RING_OPEN
    d = np.abs(_disc_sdf(px, py, x, y, r)) - RING_THICK
    return _coverage(d, pixel)


def render(state: WorldState, cfg: RenderConfig) -> np.ndarray:
    """Pure function of (state, cfg); float32 output."""
    if cfg.mode == "state_vector":
        return render_state_vector(state)
    res = cfg.resolution
    px, py = _grid(res)
    pixel = 1.0 / res
    img = np.full((3, res, res), BACKGROUND, dtype=np.float64)
    for cont in state.containers:
        col = tuple(0.5 * c for c in COLOR_VECS[cont.color])
        _composite(img, _container_alpha(px, py, pixel, cont), col)
    for obj in state.objects:
        _composite(img, _object_alpha(px, py, pixel, obj), COLOR_VECS[obj.color])
    _composite(
        img,
        _gripper_alpha(px, py, pixel, state.gripper_pos, state.grip_closed, cfg.embodiment_sprite),
        GRIPPER_COLOR,
    )
    return np.clip(img, -1.0, 1.0).astype(np.float32)


def render_state_vector(state: WorldState) -> np.ndarray:
    """Fixed-layout vector: gripper block, object slots, container slots."""
    if len(state.objects) > MAX_OBJECTS or len(state.containers) > MAX_CONTAINERS:
        raise ValueError("state exceeds state-vector slot capacity")
    vec = np.zeros(STATE_VECTOR_DIM, dtype=np.float32)
    vec[0], vec[1] = state.gripper_pos
    vec[2] = 1.0 if state.grip_closed else 0.0
    vec[3] = 1.0 if state.held_object is not None else 0.0
    off = 4
    obj_slot = 4 + len(COLORS) + len(SHAPES)
    for i, o in enumerate(state.objects):
        base = off + i * obj_slot
        vec[base] = 1.0
        vec[base + 1], vec[base + 2] = o.pos
        vec[base + 3] = 1.0 if state.held_object == i else 0.0
        vec[base + 4 + COLORS.index(o.color)] = 1.0
        vec[base + 4 + len(COLORS) + SHAPES.index(o.shape)] = 1.0
    off += MAX_OBJECTS * obj_slot
    cont_slot = 5 + len(CONTAINER_KINDS) + len(COLORS)
    for i, c in enumerate(state.containers):
        base = off + i * cont_slot
        x0, y0, x1, y1 = c.rect
        vec[base] = 1.0
        vec[base + 1], vec[base + 2] = c.center
        vec[base + 3] = (x1 - x0) / 2.0
        vec[base + 4] = (y1 - y0) / 2.0
        vec[base + 5 + CONTAINER_KINDS.index(c.kind)] = 1.0
        vec[base + 5 + len(CONTAINER_KINDS) + COLORS.index(c.color)] = 1.0
    return vec
