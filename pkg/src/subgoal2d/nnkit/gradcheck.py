"""Central finite-difference verification of analytic gradients.

The numeric side only ever calls the forward pass, in float64, so it stays
independent of the backward implementations it is checking.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .autodiff import Node, backward, leaf


def analytic_grads(
    loss_fn: Callable[[dict[str, Node]], Node], params: dict[str, np.ndarray]
) -> tuple[float, dict[str, np.ndarray]]:
    nodes = {k: leaf(v.astype(np.float64), needs_grad=True) for k, v in params.items()}
    loss = loss_fn(nodes)
    backward(loss)
    return float(loss.data), {
        k: (n.grad if n.grad is not None else np.zeros_like(n.data)) for k, n in nodes.items()
    }


def numeric_grad_entries(
    loss_fn: Callable[[dict[str, Node]], Node],
    params: dict[str, np.ndarray],
    name: str,
    flat_indices: np.ndarray,
    h: float = 1e-4,
) -> np.ndarray:
    """Central differences for selected entries of one parameter array."""
    work = {k: v.astype(np.float64).copy() for k, v in params.items()}
    target = work[name].reshape(-1)
    out = np.empty(len(flat_indices), dtype=np.float64)

    def eval_loss() -> float:
        nodes = {k: leaf(v, needs_grad=False) for k, v in work.items()}
        return float(loss_fn(nodes).data)

    for row, idx in enumerate(flat_indices):
        orig = target[idx]
        target[idx] = orig + h
        lp = eval_loss()
        target[idx] = orig - h
        lm = eval_loss()
        target[idx] = orig
        out[row] = (lp - lm) / (2.0 * h)
    return out


def rel_error(a: np.ndarray, b: np.ndarray, floor: float = 1e-4) -> float:
    """Max |a-b| / max(|a|, |b|, floor); entries below the floor compare
    absolutely (gradients that tiny are indistinguishable from FD noise)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / denom)) if a.size else 0.0


def check_gradients(
    loss_fn: Callable[[dict[str, Node]], Node],
    params: dict[str, np.ndarray],
    rng: np.random.Generator,
    entries_per_param: int = 4,
    h: float = 1e-4,
) -> float:
    """Sampled central-difference check over every parameter; returns the
    worst relative error seen."""
    _, grads = analytic_grads(loss_fn, params)
    worst = 0.0
    for name, arr in params.items():
        n = arr.size
        k = min(entries_per_param, n)
        idx = rng.choice(n, size=k, replace=False)
        numeric = numeric_grad_entries(loss_fn, params, name, idx, h)
        analytic = grads[name].reshape(-1)[idx]
        err = rel_error(analytic, numeric)
        worst = max(worst, err)
    return worst
