# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Direct 2D convolution kernels (forward, input grad, weight grad).

Same contracts as the pure-numpy implementations in ``kernels.py``.  Loops are
arranged as shift-and-scale row updates with hoisted edge bounds so the C
compiler can vectorize the unit-stride inner loops.  Parallel regions
partition output elements disjointly, keeping accumulation order fixed and
results reproducible run to run.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange

ctypedef fused floating:
    float
    double


cdef inline Py_ssize_t _lo(Py_ssize_t k, int stride, int pad) noexcept nogil:
    # smallest out index with out*stride - pad + k >= 0
    cdef Py_ssize_t lo = 0
    while lo * stride - pad + k < 0:
        lo += 1
    return lo


cdef inline Py_ssize_t _hi(Py_ssize_t k, int stride, int pad, Py_ssize_t n_in,
                           Py_ssize_t n_out) noexcept nogil:
    # one past the largest out index with out*stride - pad + k <= n_in - 1
    cdef Py_ssize_t hi = n_out
    while hi > 0 and (hi - 1) * stride - pad + k >= n_in:
        hi -= 1
    return hi


cdef void _fwd_sample(floating[:, :, :, ::1] x, floating[:, :, :, ::1] w,
                      floating[:, :, :, ::1] y, Py_ssize_t b, int stride, int pad) noexcept nogil:
    cdef Py_ssize_t C = x.shape[1], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t O = w.shape[0], KH = w.shape[2], KW = w.shape[3]
    cdef Py_ssize_t OH = y.shape[2], OW = y.shape[3]
    cdef Py_ssize_t o, c, ki, kj, oh, ow, oh0, oh1, ow0, ow1, ih, base
    cdef floating wv
    for o in range(O):
        for oh in range(OH):
            for ow in range(OW):
                y[b, o, oh, ow] = 0
        for c in range(C):
            for ki in range(KH):
                oh0 = _lo(ki, stride, pad)
                oh1 = _hi(ki, stride, pad, H, OH)
                for kj in range(KW):
                    ow0 = _lo(kj, stride, pad)
                    ow1 = _hi(kj, stride, pad, W, OW)
                    wv = w[o, c, ki, kj]
                    if wv == 0:
                        continue
                    for oh in range(oh0, oh1):
                        ih = oh * stride - pad + ki
                        base = kj - pad
                        if stride == 1:
                            for ow in range(ow0, ow1):
                                y[b, o, oh, ow] += wv * x[b, c, ih, base + ow]
                        else:
                            for ow in range(ow0, ow1):
                                y[b, o, oh, ow] += wv * x[b, c, ih, base + ow * stride]


cdef void _gx_sample(floating[:, :, :, ::1] w, floating[:, :, :, ::1] gy,
                     floating[:, :, :, ::1] gx, Py_ssize_t b, int stride, int pad) noexcept nogil:
    cdef Py_ssize_t O = w.shape[0], C = w.shape[1], KH = w.shape[2], KW = w.shape[3]
    cdef Py_ssize_t OH = gy.shape[2], OW = gy.shape[3]
    cdef Py_ssize_t H = gx.shape[2], W = gx.shape[3]
    cdef Py_ssize_t o, c, ki, kj, oh, ow, oh0, oh1, ow0, ow1, ih, base
    cdef floating wv
    for c in range(C):
        for ih in range(H):
            for ow in range(W):
                gx[b, c, ih, ow] = 0
    for o in range(O):
        for c in range(C):
            for ki in range(KH):
                oh0 = _lo(ki, stride, pad)
                oh1 = _hi(ki, stride, pad, H, OH)
                for kj in range(KW):
                    ow0 = _lo(kj, stride, pad)
                    ow1 = _hi(kj, stride, pad, W, OW)
                    wv = w[o, c, ki, kj]
                    if wv == 0:
                        continue
                    for oh in range(oh0, oh1):
                        ih = oh * stride - pad + ki
                        base = kj - pad
                        if stride == 1:
                            for ow in range(ow0, ow1):
                                gx[b, c, ih, base + ow] += wv * gy[b, o, oh, ow]
                        else:
                            for ow in range(ow0, ow1):
                                gx[b, c, ih, base + ow * stride] += wv * gy[b, o, oh, ow]


cdef void _gw_channel(floating[:, :, :, ::1] x, floating[:, :, :, ::1] gy,
                      floating[:, :, :, ::1] gw, Py_ssize_t o, int stride, int pad) noexcept nogil:
    cdef Py_ssize_t B = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t OH = gy.shape[2], OW = gy.shape[3]
    cdef Py_ssize_t KH = gw.shape[2], KW = gw.shape[3]
    cdef Py_ssize_t b, c, ki, kj, oh, ow, oh0, oh1, ow0, ow1, ih, base
    cdef floating acc
    for c in range(C):
        for ki in range(KH):
            oh0 = _lo(ki, stride, pad)
            oh1 = _hi(ki, stride, pad, H, OH)
            for kj in range(KW):
                ow0 = _lo(kj, stride, pad)
                ow1 = _hi(kj, stride, pad, W, OW)
                acc = 0
                for b in range(B):
                    for oh in range(oh0, oh1):
                        ih = oh * stride - pad + ki
                        base = kj - pad
                        if stride == 1:
                            for ow in range(ow0, ow1):
                                acc += gy[b, o, oh, ow] * x[b, c, ih, base + ow]
                        else:
                            for ow in range(ow0, ow1):
                                acc += gy[b, o, oh, ow] * x[b, c, ih, base + ow * stride]
                gw[o, c, ki, kj] = acc


def conv2d_forward(floating[:, :, :, ::1] x, floating[:, :, :, ::1] w, int stride, int pad):
    cdef Py_ssize_t B = x.shape[0], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t O = w.shape[0], KH = w.shape[2], KW = w.shape[3]
    cdef Py_ssize_t OH = (H + 2 * pad - KH) // stride + 1
    cdef Py_ssize_t OW = (W + 2 * pad - KW) // stride + 1
    if floating is float:
        y_np = np.empty((B, O, OH, OW), dtype=np.float32)
    else:
        y_np = np.empty((B, O, OH, OW), dtype=np.float64)
    cdef floating[:, :, :, ::1] y = y_np
    cdef Py_ssize_t b
    if B > 1:
        for b in prange(B, nogil=True, schedule="static"):
            _fwd_sample(x, w, y, b, stride, pad)
    else:
        with nogil:
            _fwd_sample(x, w, y, 0, stride, pad)
    return y_np


def conv2d_grad_input(floating[:, :, :, ::1] w, floating[:, :, :, ::1] gy,
                      int stride, int pad, Py_ssize_t H, Py_ssize_t W):
    cdef Py_ssize_t B = gy.shape[0], C = w.shape[1]
    if floating is float:
        gx_np = np.empty((B, C, H, W), dtype=np.float32)
    else:
        gx_np = np.empty((B, C, H, W), dtype=np.float64)
    cdef floating[:, :, :, ::1] gx = gx_np
    cdef Py_ssize_t b
    if B > 1:
        for b in prange(B, nogil=True, schedule="static"):
            _gx_sample(w, gy, gx, b, stride, pad)
    else:
        with nogil:
            _gx_sample(w, gy, gx, 0, stride, pad)
    return gx_np


def conv2d_grad_weight(floating[:, :, :, ::1] x, floating[:, :, :, ::1] gy,
                       int stride, int pad, Py_ssize_t KH, Py_ssize_t KW):
    cdef Py_ssize_t O = gy.shape[1], C = x.shape[1]
    if floating is float:
        gw_np = np.empty((O, C, KH, KW), dtype=np.float32)
    else:
        gw_np = np.empty((O, C, KH, KW), dtype=np.float64)
    cdef floating[:, :, :, ::1] gw = gw_np
    cdef Py_ssize_t o
    for o in prange(O, nogil=True, schedule="static"):
        _gw_channel(x, gy, gw, o, stride, pad)
    return gw_np
