"""2D tabletop manipulation environment: world, renderer, expert, scenes."""

from .expert import rollout_expert, scripted_expert
from .render import RenderConfig, render, render_state_vector
from .scenes import (
    make_goal_state,
    sample_chain,
    sample_scene,
    sample_scene_for_task,
    validate_chain,
)
from .tasks import (
    COLORS,
    CONTAINER_KINDS,
    REGION_NAMES,
    RESERVED_COMBOS,
    SHAPES,
    TEMPLATES,
    TRAIN_COMBOS,
    VOCAB,
    VOCAB_SIZE,
    TaskParseError,
    TaskSpec,
    null_token_ids,
    task_token_ids,
)
from .world import (
    A_MAX,
    GRASP_EPS,
    REGIONS,
    Action,
    ContainerState,
    ObjectState,
    TaskNotApplicableError,
    WorldState,
    point_in_rect,
    step,
    success,
    validate_state,
)

__all__ = [
    "A_MAX",
    "Action",
    "COLORS",
    "CONTAINER_KINDS",
    "ContainerState",
    "GRASP_EPS",
    "ObjectState",
    "REGIONS",
    "REGION_NAMES",
    "RESERVED_COMBOS",
    "RenderConfig",
    "SHAPES",
    "TEMPLATES",
    "TRAIN_COMBOS",
    "TaskNotApplicableError",
    "TaskParseError",
    "TaskSpec",
    "VOCAB",
    "VOCAB_SIZE",
    "WorldState",
    "make_goal_state",
    "null_token_ids",
    "point_in_rect",
    "render",
    "render_state_vector",
    "rollout_expert",
    "sample_chain",
    "sample_scene",
    "sample_scene_for_task",
    "scripted_expert",
    "step",
    "success",
    "task_token_ids",
    "validate_chain",
    "validate_state",
]
