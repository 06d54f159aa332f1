"""Reverse-mode autodiff over the fixed op zoo both models are built from.

Each op builds a ``Node`` whose closure knows how to push gradients to its
parents; ``backward`` runs the tape in reverse topological order.  Ops operate
on numpy arrays and preserve the input dtype, so a float64 verification pass
is just a matter of feeding float64 leaves.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels


class Node:
    __slots__ = ("data", "grad", "parents", "bwd", "needs_grad")

    def __init__(self, data, parents=(), bwd=None, needs_grad=None):
        self.data = data
        self.grad = None
        self.parents = parents
        self.bwd = bwd
        if needs_grad is None:
            needs_grad = any(p.needs_grad for p in parents)
        self.needs_grad = needs_grad

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def accumulate(self, g):
        if self.grad is None:
            self.grad = g.copy() if isinstance(g, np.ndarray) else g
        else:
            self.grad += g


def leaf(data: np.ndarray, needs_grad: bool = False) -> Node:
    return Node(np.asarray(data), needs_grad=needs_grad)


def backward(root: Node) -> None:
    """Seed d(root)/d(root)=1 and propagate to every reachable parent."""
    topo: list[Node] = []
    seen: set[int] = set()
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.needs_grad and id(p) not in seen:
                stack.append((p, False))
    root.grad = np.ones_like(root.data)
    for node in reversed(topo):
        if node.bwd is not None and node.grad is not None:
            node.bwd(node.grad)


def _shape_err(op: str, detail: str) -> ValueError:
    return ValueError(f"{op}: {detail}")


# ---------------------------------------------------------------------------
# ops


def dense(x: Node, w: Node, b: Node | None = None) -> Node:
    if x.data.shape[-1] != w.data.shape[0]:
        raise _shape_err("dense", f"input {x.shape} incompatible with weight {w.shape}")
    y = x.data @ w.data
    if b is not None:
        y = y + b.data
    parents = (x, w) + ((b,) if b is not None else ())
    out = Node(y, parents)

    def bwd(g):
        if x.needs_grad:
            x.accumulate(g @ w.data.T)
        if w.needs_grad:
            w.accumulate(x.data.T @ g)
        if b is not None and b.needs_grad:
            b.accumulate(g.sum(axis=tuple(range(g.ndim - 1))))

    out.bwd = bwd
    return out


def conv2d(x: Node, w: Node, b: Node | None = None, stride: int = 1, pad: int = 1) -> Node:
    if x.data.ndim != 4 or w.data.ndim != 4 or x.data.shape[1] != w.data.shape[1]:
        raise _shape_err("conv2d", f"input {x.shape} incompatible with weight {w.shape}")
    y = kernels.conv2d_forward(x.data, w.data, stride, pad)
    if b is not None:
        y = y + b.data[None, :, None, None]
    parents = (x, w) + ((b,) if b is not None else ())
    out = Node(y, parents)
    H, W = x.data.shape[2], x.data.shape[3]
    KH, KW = w.data.shape[2], w.data.shape[3]

    def bwd(g):
        g = np.ascontiguousarray(g)
        if x.needs_grad:
            x.accumulate(kernels.conv2d_grad_input(w.data, g, stride, pad, H, W))
        if w.needs_grad:
            w.accumulate(kernels.conv2d_grad_weight(x.data, g, stride, pad, KH, KW))
        if b is not None and b.needs_grad:
            b.accumulate(g.sum(axis=(0, 2, 3)))

    out.bwd = bwd
    return out


def group_norm(x: Node, gamma: Node, beta: Node, groups: int, eps: float = 1e-5) -> Node:
    B, C, H, W = x.data.shape
    if C % groups:
        raise _shape_err("group_norm", f"channels {C} not divisible by {groups} groups")
    xg = x.data.reshape(B, groups, -1)
    mu = xg.mean(axis=-1, keepdims=True)
    var = xg.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat_g = (xg - mu) * inv
    xhat = xhat_g.reshape(B, C, H, W)
    y = gamma.data[None, :, None, None] * xhat + beta.data[None, :, None, None]
    out = Node(y, (x, gamma, beta))

    def bwd(g):
        if gamma.needs_grad:
            gamma.accumulate((g * xhat).sum(axis=(0, 2, 3)))
        if beta.needs_grad:
            beta.accumulate(g.sum(axis=(0, 2, 3)))
        if x.needs_grad:
            gxhat = (g * gamma.data[None, :, None, None]).reshape(B, groups, -1)
            m1 = gxhat.mean(axis=-1, keepdims=True)
            m2 = (gxhat * xhat_g).mean(axis=-1, keepdims=True)
            gx = (gxhat - m1 - xhat_g * m2) * inv
            x.accumulate(gx.reshape(B, C, H, W))

    out.bwd = bwd
    return out


def silu(x: Node) -> Node:
    s = 1.0 / (1.0 + np.exp(-x.data))
    out = Node(x.data * s, (x,))

    def bwd(g):
        if x.needs_grad:
            x.accumulate(g * (s * (1.0 + x.data * (1.0 - s))))

    out.bwd = bwd
    return out


def add(a: Node, b: Node) -> Node:
    if a.data.shape != b.data.shape:
        raise _shape_err("add", f"shape mismatch {a.shape} vs {b.shape}")
    out = Node(a.data + b.data, (a, b))

    def bwd(g):
        if a.needs_grad:
            a.accumulate(g)
        if b.needs_grad:
            b.accumulate(g)

    out.bwd = bwd
    return out


def film(x: Node, scale: Node, shift: Node) -> Node:
    """Feature-wise affine modulation: y = x * (1 + scale) + shift.

    ``scale``/``shift`` are [B, C]; broadcast over spatial dims if present.
    """
    if scale.data.shape != shift.data.shape or scale.data.shape[:2] != (
        x.data.shape[0],
        x.data.shape[1],
    ):
        raise _shape_err("film", f"cond {scale.shape} incompatible with input {x.shape}")
    expand = (...,) + (None,) * (x.data.ndim - 2)
    sc = scale.data[expand]
    sh = shift.data[expand]
    out = Node(x.data * (1.0 + sc) + sh, (x, scale, shift))
    spatial_axes = tuple(range(2, x.data.ndim))

    def bwd(g):
        if x.needs_grad:
            x.accumulate(g * (1.0 + sc))
        if scale.needs_grad:
            gs = g * x.data
            scale.accumulate(gs.sum(axis=spatial_axes) if spatial_axes else gs)
        if shift.needs_grad:
            shift.accumulate(g.sum(axis=spatial_axes) if spatial_axes else g)

    out.bwd = bwd
    return out


def concat_channels(a: Node, b: Node) -> Node:
    if a.data.shape[0] != b.data.shape[0] or a.data.shape[2:] != b.data.shape[2:]:
        raise _shape_err("concat_channels", f"{a.shape} vs {b.shape}")
    ca = a.data.shape[1]
    out = Node(np.concatenate([a.data, b.data], axis=1), (a, b))

    def bwd(g):
        if a.needs_grad:
            a.accumulate(g[:, :ca])
        if b.needs_grad:
            b.accumulate(g[:, ca:])

    out.bwd = bwd
    return out


def reshape(x: Node, shape: tuple[int, ...]) -> Node:
    out = Node(x.data.reshape(shape), (x,))

    def bwd(g):
        if x.needs_grad:
            x.accumulate(g.reshape(x.data.shape))

    out.bwd = bwd
    return out


def flatten(x: Node) -> Node:
    return reshape(x, (x.data.shape[0], -1))


def upsample2x(x: Node) -> Node:
    """Nearest-neighbour 2x spatial upsampling."""
    B, C, H, W = x.data.shape
    out = Node(x.data.repeat(2, axis=2).repeat(2, axis=3), (x,))

    def bwd(g):
        if x.needs_grad:
            x.accumulate(g.reshape(B, C, H, 2, W, 2).sum(axis=(3, 5)))

    out.bwd = bwd
    return out


def embedding_sum(table: Node, ids: np.ndarray) -> Node:
    """Sum of table rows per batch element; ids is an int array [B, K]."""
    ids = np.asarray(ids)
    if ids.ndim != 2:
        raise _shape_err("embedding_sum", f"ids must be [B, K], got {ids.shape}")
    out = Node(table.data[ids].sum(axis=1), (table,))

    def bwd(g):
        if table.needs_grad:
            gt = np.zeros_like(table.data)
            np.add.at(gt, ids.reshape(-1), np.repeat(g, ids.shape[1], axis=0))
            table.accumulate(gt)

    out.bwd = bwd
    return out


def mse_mean(pred: Node, target: np.ndarray) -> Node:
    """Mean over every element of the squared error; returns a 0-d Node."""
    target = np.asarray(target)
    if pred.data.shape != target.shape:
        raise _shape_err("mse_mean", f"pred {pred.shape} vs target {target.shape}")
    diff = pred.data - target
    out = Node(np.asarray((diff * diff).mean()), (pred,))
    n = diff.size

    def bwd(g):
        if pred.needs_grad:
            pred.accumulate((2.0 / n) * g * diff)

    out.bwd = bwd
    return out


def sinusoidal_embedding(t, dim: int, max_period: float = 10000.0, dtype=np.float32) -> np.ndarray:
    """Interleaved sin/cos timestep features: [sin, cos, sin, cos, ...].

    At t=0 this yields the alternating (0, 1, 0, 1, ...) pattern.
    """
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    half = dim // 2
    freqs = np.exp(-math.log(max_period) * np.arange(half, dtype=np.float64) / half)
    args = t[:, None] * freqs[None, :]
    emb = np.empty((t.shape[0], dim), dtype=np.float64)
    emb[:, 0::2] = np.sin(args)
    emb[:, 1::2] = np.cos(args)
    return emb.astype(dtype)
