"""Minimal differentiable-computation substrate used by both models."""

from .autodiff import (
    Node,
    add,
    backward,
    concat_channels,
    conv2d,
    dense,
    embedding_sum,
    film,
    flatten,
    group_norm,
    leaf,
    mse_mean,
    reshape,
    silu,
    sinusoidal_embedding,
    upsample2x,
)
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .kernels import BACKEND
from .optim import OptimizerConfig, ema_update, optimizer_step
from .params import ParameterStore, init_conv, init_dense, init_embedding

__all__ = [
    "BACKEND",
    "CheckpointError",
    "Node",
    "OptimizerConfig",
    "ParameterStore",
    "add",
    "backward",
    "concat_channels",
    "conv2d",
    "dense",
    "ema_update",
    "embedding_sum",
    "film",
    "flatten",
    "group_norm",
    "init_conv",
    "init_dense",
    "init_embedding",
    "leaf",
    "load_checkpoint",
    "mse_mean",
    "optimizer_step",
    "reshape",
    "save_checkpoint",
    "sinusoidal_embedding",
    "silu",
    "upsample2x",
]
