"""Named parameter arrays with an optional EMA shadow and optimizer state."""

from __future__ import annotations

import os

import numpy as np

from .autodiff import Node, leaf

DEBUG_FINITE = bool(os.environ.get("SUBGOAL2D_DEBUG"))


class ParameterStore:
    """Ordered mapping name -> float32 array, plus EMA shadow and step count."""

    def __init__(self, entries: dict[str, np.ndarray], ema: bool = False):
        self.params: dict[str, np.ndarray] = {}
        for name, arr in entries.items():
            if name in self.params:
                raise ValueError(f"duplicate parameter name {name!r}")
            self.params[name] = np.asarray(arr, dtype=np.float32)
        self.shadow: dict[str, np.ndarray] | None = (
            {k: v.copy() for k, v in self.params.items()} if ema else None
        )
        self.step_count: int = 0
        self.opt_m: dict[str, np.ndarray] = {}
        self.opt_v: dict[str, np.ndarray] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.params

    def names(self) -> list[str]:
        return list(self.params)

    def n_params(self) -> int:
        return sum(v.size for v in self.params.values())

    def wrap(self, trainable: bool = True, dtype=None, use_shadow: bool = False) -> dict[str, Node]:
        """Wrap each entry as an autodiff leaf (optionally cast / EMA copy)."""
        src = self.shadow if use_shadow else self.params
        if use_shadow and src is None:
            raise ValueError("store has no EMA shadow")
        out = {}
        for name, arr in src.items():
            data = arr.astype(dtype) if dtype is not None else arr
            out[name] = leaf(data, needs_grad=trainable)
        return out

    def check_finite(self) -> None:
        for name, arr in self.params.items():
            if not np.all(np.isfinite(arr)):
                raise FloatingPointError(f"non-finite values in parameter {name!r}")


def init_dense(rng: np.random.Generator, fan_in: int, fan_out: int, zero: bool = False):
    """Weight + bias; zero-mean uniform scaled by fan-in (or exact zeros)."""
    if zero:
        w = np.zeros((fan_in, fan_out), dtype=np.float32)
    else:
        bound = 1.0 / np.sqrt(fan_in)
        w = rng.uniform(-bound, bound, size=(fan_in, fan_out)).astype(np.float32)
    b = np.zeros(fan_out, dtype=np.float32)
    return w, b


def init_conv(
    rng: np.random.Generator, c_out: int, c_in: int, k: int, zero: bool = False
):
    if zero:
        w = np.zeros((c_out, c_in, k, k), dtype=np.float32)
    else:
        bound = 1.0 / np.sqrt(c_in * k * k)
        w = rng.uniform(-bound, bound, size=(c_out, c_in, k, k)).astype(np.float32)
    b = np.zeros(c_out, dtype=np.float32)
    return w, b


def init_embedding(rng: np.random.Generator, vocab: int, dim: int, scale: float = 0.02):
    return (rng.standard_normal((vocab, dim)) * scale).astype(np.float32)
