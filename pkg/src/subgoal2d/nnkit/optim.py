"""Adam/AdamW with linear warmup, and EMA shadow updates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DEBUG_FINITE, ParameterStore


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "adamw"  # "adam" | "adamw"
    base_lr: float = 1e-4
    warmup_steps: int = 800
    weight_decay: float = 0.01
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("adam", "adamw"):
            raise ValueError(f"unknown optimizer {self.kind!r}")
        if self.base_lr <= 0 or self.warmup_steps < 0:
            raise ValueError("base_lr must be > 0 and warmup_steps >= 0")

    def lr_at(self, step: int) -> float:
        if self.warmup_steps > 0:
            return self.base_lr * min(1.0, step / self.warmup_steps)
        return self.base_lr


def optimizer_step(
    store: ParameterStore, grads: dict[str, np.ndarray], cfg: OptimizerConfig
) -> None:
    """One in-place update; moments update even while warmup holds lr at 0."""
    b1, b2 = cfg.betas
    t = store.step_count
    lr = cfg.lr_at(t)
    bc1 = 1.0 - b1 ** (t + 1)
    bc2 = 1.0 - b2 ** (t + 1)
    for name, p in store.params.items():
        g = grads.get(name)
        if g is None:
            continue
        if g.shape != p.shape:
            raise ValueError(f"gradient shape {g.shape} != param shape {p.shape} for {name!r}")
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite gradient for parameter {name!r}")
        g = g.astype(np.float32, copy=False)
        m = store.opt_m.get(name)
        if m is None:
            m = store.opt_m[name] = np.zeros_like(p)
        v = store.opt_v.get(name)
        if v is None:
            v = store.opt_v[name] = np.zeros_like(p)
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        update = (m / bc1) / (np.sqrt(v / bc2) + cfg.eps)
        if cfg.kind == "adamw" and cfg.weight_decay:
            p -= lr * cfg.weight_decay * p
        p -= lr * update
    store.step_count += 1
    if DEBUG_FINITE:
        store.check_finite()


def ema_update(store: ParameterStore, decay: float = 0.999) -> None:
    """shadow <- decay * shadow + (1 - decay) * params, per entry."""
    if store.shadow is None:
        raise ValueError("store has no EMA shadow")
    for name, s in store.shadow.items():
        p = store.params[name]
        s *= decay
        s += (1.0 - decay) * p
