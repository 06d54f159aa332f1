"""Convolution hot kernels with two interchangeable backends.

The compiled extension (``_convext``, Cython) is used when available; setting
``SUBGOAL2D_PUREPY=1`` or a failed build falls back to the pure-numpy
implementation (im2col + GEMM).  Both satisfy the same contracts; parity is
covered by tests and ``benchmarks/bench_kernels.py`` compares their speed.

Layout: NCHW activations, OIHW weights, square kernels, stride 1 or 2.
"""

from __future__ import annotations

import os

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _check(x: np.ndarray) -> np.ndarray:
    if x.dtype not in (np.float32, np.float64):
        raise TypeError(f"conv kernels require float32/float64, got {x.dtype}")
    return np.ascontiguousarray(x)


def _out_hw(H: int, W: int, KH: int, KW: int, stride: int, pad: int) -> tuple[int, int]:
    return (H + 2 * pad - KH) // stride + 1, (W + 2 * pad - KW) // stride + 1


def _im2col(x: np.ndarray, KH: int, KW: int, stride: int, pad: int) -> np.ndarray:
    """Returns [B*OH*OW, C*KH*KW] patch matrix."""
    if pad:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    win = sliding_window_view(x, (KH, KW), axis=(2, 3))[:, :, ::stride, ::stride]
    B, C, OH, OW = win.shape[:4]
    return win.transpose(0, 2, 3, 1, 4, 5).reshape(B * OH * OW, C * KH * KW)


def np_conv2d_forward(x: np.ndarray, w: np.ndarray, stride: int, pad: int) -> np.ndarray:
    B, C, H, W = x.shape
    O, _, KH, KW = w.shape
    OH, OW = _out_hw(H, W, KH, KW, stride, pad)
    cols = _im2col(x, KH, KW, stride, pad)
    y = cols @ w.reshape(O, -1).T
    return np.ascontiguousarray(y.reshape(B, OH, OW, O).transpose(0, 3, 1, 2))


def np_conv2d_grad_input(
    w: np.ndarray, gy: np.ndarray, stride: int, pad: int, H: int, W: int
) -> np.ndarray:
    B, O, OH, OW = gy.shape
    _, C, KH, KW = w.shape
    gcols = gy.transpose(0, 2, 3, 1).reshape(B * OH * OW, O) @ w.reshape(O, -1)
    gcols = gcols.reshape(B, OH, OW, C, KH, KW).transpose(0, 3, 1, 2, 4, 5)
    gxp = np.zeros((B, C, H + 2 * pad, W + 2 * pad), dtype=gy.dtype)
    for ki in range(KH):
        for kj in range(KW):
            gxp[:, :, ki : ki + stride * OH : stride, kj : kj + stride * OW : stride] += gcols[
                :, :, :, :, ki, kj
            ]
    if pad:
        return np.ascontiguousarray(gxp[:, :, pad : pad + H, pad : pad + W])
    return gxp


def np_conv2d_grad_weight(
    x: np.ndarray, gy: np.ndarray, stride: int, pad: int, KH: int, KW: int
) -> np.ndarray:
    B, C, H, W = x.shape
    O = gy.shape[1]
    cols = _im2col(x, KH, KW, stride, pad)
    gw = gy.transpose(1, 0, 2, 3).reshape(O, -1) @ cols
    return gw.reshape(O, C, KH, KW)


_ext = None
if not os.environ.get("SUBGOAL2D_PUREPY"):
    try:
        from . import _convext as _ext  # type: ignore[attr-defined]
    except ImportError:
        _ext = None

BACKEND = "cython" if _ext is not None else "numpy"


def conv2d_forward(x: np.ndarray, w: np.ndarray, stride: int = 1, pad: int = 1) -> np.ndarray:
    x, w = _check(x), _check(w)
    if _ext is not None:
        return _ext.conv2d_forward(x, w, stride, pad)
    return np_conv2d_forward(x, w, stride, pad)


def conv2d_grad_input(
    w: np.ndarray, gy: np.ndarray, stride: int, pad: int, H: int, W: int
) -> np.ndarray:
    w, gy = _check(w), _check(gy)
    if _ext is not None:
        return _ext.conv2d_grad_input(w, gy, stride, pad, H, W)
    return np_conv2d_grad_input(w, gy, stride, pad, H, W)


def conv2d_grad_weight(
    x: np.ndarray, gy: np.ndarray, stride: int, pad: int, KH: int, KW: int
) -> np.ndarray:
    x, gy = _check(x), _check(gy)
    if _ext is not None:
        return _ext.conv2d_grad_weight(x, gy, stride, pad, KH, KW)
    return np_conv2d_grad_weight(x, gy, stride, pad, KH, KW)
