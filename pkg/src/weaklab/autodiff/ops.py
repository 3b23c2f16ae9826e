"""Differentiable primitives.

Each primitive computes forward values eagerly and registers a closure that
maps the output gradient to parent gradients. Conventions:

- elementwise ops broadcast like numpy; gradients are summed back over
  broadcast axes,
- reductions (sum, mean) accumulate in float64 and cast back to the input
  dtype,
- conv2d is stride 1 with zero 'same' padding and odd kernels, NCHW layout,
- backward closures keep references to parent tensors only; im2col buffers
  and relu masks are recomputed during the backward pass to keep resident
  memory proportional to the activations.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import Tensor, as_tensor, make_node


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum ``g`` down to ``shape`` (inverse of numpy broadcasting)."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def _check_broadcast(a: Tensor, b: Tensor, op: str) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ValueError(f"{op}: incompatible shapes {a.shape} vs {b.shape}") from None


def add(a, b) -> Tensor:
    a = as_tensor(a)
    b = as_tensor(b, like=a)
    _check_broadcast(a, b, "add")
    out = a.values + b.values

    def bwd(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return make_node(out, (a, b), bwd)


def sub(a, b) -> Tensor:
    a = as_tensor(a)
    b = as_tensor(b, like=a)
    _check_broadcast(a, b, "sub")
    out = a.values - b.values

    def bwd(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return make_node(out, (a, b), bwd)


def mul(a, b) -> Tensor:
    a = as_tensor(a)
    b = as_tensor(b, like=a)
    _check_broadcast(a, b, "mul")
    out = a.values * b.values

    def bwd(g):
        return _unbroadcast(g * b.values, a.shape), _unbroadcast(g * a.values, b.shape)

    return make_node(out, (a, b), bwd)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    a = as_tensor(a)
    b = as_tensor(b, like=a)
    if a.values.ndim != 2 or b.values.ndim != 2:
        raise ValueError(f"matmul expects 2-d operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul: inner dimensions differ, {a.shape} vs {b.shape}")
    out = a.values @ b.values

    def bwd(g):
        return g @ b.values.T, a.values.T @ g

    return make_node(out, (a, b), bwd)


def _im2col(x: np.ndarray, kh: int, kw: int) -> np.ndarray:
    """(N,C,H,W) zero-padded to same size -> (N*H*W, C*kh*kw) patch matrix."""
    n, c, h, w = x.shape
    xp = np.pad(x, ((0, 0), (0, 0), (kh // 2, kh // 2), (kw // 2, kw // 2)))
    cols = sliding_window_view(xp, (kh, kw), axis=(2, 3))
    cols = np.ascontiguousarray(cols.transpose(0, 2, 3, 1, 4, 5))
    return cols.reshape(n * h * w, c * kh * kw)


def _conv2d_raw(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    n, _, h, wd = x.shape
    o = w.shape[0]
    cols = _im2col(x, w.shape[2], w.shape[3])
    out = cols @ w.reshape(o, -1).T
    return np.ascontiguousarray(out.reshape(n, h, wd, o).transpose(0, 3, 1, 2))


def conv2d(x: Tensor, w: Tensor) -> Tensor:
    """Stride-1 'same' convolution, NCHW input and OIHW weight, odd kernels."""
    x = as_tensor(x)
    w = as_tensor(w, like=x)
    if x.values.ndim != 4 or w.values.ndim != 4:
        raise ValueError(f"conv2d expects 4-d input and weight, got {x.shape} and {w.shape}")
    if x.shape[1] != w.shape[1]:
        raise ValueError(f"conv2d: channel mismatch, input {x.shape} vs weight {w.shape}")
    kh, kw = w.shape[2], w.shape[3]
    if kh % 2 == 0 or kw % 2 == 0:
        raise ValueError(f"conv2d supports odd kernels only, got {w.shape}")
    out = _conv2d_raw(x.values, w.values)

    def bwd(g):
        n, o, h, wd = g.shape
        g2 = np.ascontiguousarray(g.transpose(0, 2, 3, 1)).reshape(n * h * wd, o)
        cols = _im2col(x.values, kh, kw)
        dw = (g2.T @ cols).reshape(w.shape)
        wf = np.ascontiguousarray(w.values[:, :, ::-1, ::-1].transpose(1, 0, 2, 3))
        dx = _conv2d_raw(g, wf)
        return dx, dw

    return make_node(out, (x, w), bwd)


def avg_pool2d(x: Tensor, k: int = 2) -> Tensor:
    """Non-overlapping k x k mean pooling; trailing odd rows/columns are dropped."""
    x = as_tensor(x)
    if x.values.ndim != 4:
        raise ValueError(f"avg_pool2d expects a 4-d input, got {x.shape}")
    n, c, h, w = x.shape
    ho, wo = h // k, w // k
    if ho == 0 or wo == 0:
        raise ValueError(f"avg_pool2d: input {x.shape} smaller than pool size {k}")
    v = x.values[:, :, : ho * k, : wo * k]
    out = v.reshape(n, c, ho, k, wo, k).mean(axis=(3, 5), dtype=np.float64).astype(x.dtype)

    def bwd(g):
        dx = np.zeros_like(x.values)
        dx[:, :, : ho * k, : wo * k] = np.broadcast_to(
            g[:, :, :, None, :, None] / (k * k), (n, c, ho, k, wo, k)
        ).reshape(n, c, ho * k, wo * k)
        return (dx,)

    return make_node(out, (x,), bwd)


def leaky_relu(x: Tensor, alpha: float = 0.01) -> Tensor:
    x = as_tensor(x)
    out = np.where(x.values > 0, x.values, x.values * x.dtype.type(alpha))

    def bwd(g):
        return (np.where(x.values > 0, g, g * alpha),)

    return make_node(out, (x,), bwd)


def hinge(x: Tensor) -> Tensor:
    """max(x, 0) with subgradient 0 at x = 0."""
    x = as_tensor(x)
    out = np.maximum(x.values, 0)

    def bwd(g):
        return (np.where(x.values > 0, g, 0),)

    return make_node(out, (x,), bwd)


def sigmoid(x: Tensor) -> Tensor:
    x = as_tensor(x)
    v = x.values
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)

    def bwd(g):
        return (g * out * (1.0 - out),)

    return make_node(out, (x,), bwd)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    shifted = x.values - x.values.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)

    def bwd(g):
        dot = (g * out).sum(axis=axis, keepdims=True)
        return (out * (g - dot),)

    return make_node(out, (x,), bwd)


def log(x: Tensor) -> Tensor:
    x = as_tensor(x)
    out = np.log(x.values)

    def bwd(g):
        return (g / x.values,)

    return make_node(out, (x,), bwd)


def exp(x: Tensor) -> Tensor:
    x = as_tensor(x)
    out = np.exp(x.values)

    def bwd(g):
        return (g * out,)

    return make_node(out, (x,), bwd)


def square(x: Tensor) -> Tensor:
    x = as_tensor(x)
    out = x.values * x.values

    def bwd(g):
        return (2.0 * g * x.values,)

    return make_node(out, (x,), bwd)


def clip(x: Tensor, lo: float, hi: float) -> Tensor:
    """Clamp values to [lo, hi]; gradient is zero where the clamp binds."""
    x = as_tensor(x)
    out = np.clip(x.values, lo, hi)

    def bwd(g):
        return (np.where((x.values > lo) & (x.values < hi), g, 0),)

    return make_node(out, (x,), bwd)


def _norm_axes(axis, ndim: int):
    if axis is None:
        return None
    if isinstance(axis, int):
        axis = (axis,)
    return tuple(a % ndim for a in axis)


def sum_(x: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    x = as_tensor(x)
    out = x.values.sum(axis=axis, keepdims=keepdims, dtype=np.float64).astype(x.dtype)
    axes = _norm_axes(axis, x.values.ndim)

    def bwd(g):
        if axes is not None and not keepdims:
            shape = list(x.shape)
            for a in axes:
                shape[a] = 1
            g = g.reshape(shape)
        return (np.broadcast_to(g, x.shape).astype(x.dtype, copy=False),)

    return make_node(out, (x,), bwd)


def mean(x: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    x = as_tensor(x)
    out = x.values.mean(axis=axis, keepdims=keepdims, dtype=np.float64).astype(x.dtype)
    axes = _norm_axes(axis, x.values.ndim)
    if axes is None:
        count = x.values.size
    else:
        count = 1
        for a in axes:
            count *= x.shape[a]

    def bwd(g):
        if axes is not None and not keepdims:
            shape = list(x.shape)
            for a in axes:
                shape[a] = 1
            g = g.reshape(shape)
        return (np.broadcast_to(g / count, x.shape).astype(x.dtype, copy=False),)

    return make_node(out, (x,), bwd)


def l2_normalize(x: Tensor, axis: int = -1, eps: float = 1e-12) -> Tensor:
    """x / max(||x||_2, eps) along ``axis``."""
    x = as_tensor(x)
    n = np.sqrt((x.values.astype(np.float64) ** 2).sum(axis=axis, keepdims=True))
    r = np.maximum(n, eps).astype(x.dtype)
    out = x.values / r

    def bwd(g):
        dot = (g * out).sum(axis=axis, keepdims=True)
        main = (g - out * dot) / r
        return (np.where(n > eps, main, g / eps).astype(x.dtype, copy=False),)

    return make_node(out, (x,), bwd)


def concat(tensors: list[Tensor], axis: int = 0) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    if not tensors:
        raise ValueError("concat of an empty list")
    out = np.concatenate([t.values for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]
    offsets = np.cumsum(sizes)[:-1]

    def bwd(g):
        return tuple(np.split(g, offsets, axis=axis))

    return make_node(out, tuple(tensors), bwd)


def reshape(x: Tensor, shape) -> Tensor:
    x = as_tensor(x)
    out = x.values.reshape(shape)

    def bwd(g):
        return (g.reshape(x.shape),)

    return make_node(out, (x,), bwd)


def transpose(x: Tensor, axes: tuple[int, ...]) -> Tensor:
    x = as_tensor(x)
    out = np.ascontiguousarray(x.values.transpose(axes))
    inv = np.argsort(axes)

    def bwd(g):
        return (np.ascontiguousarray(g.transpose(inv)),)

    return make_node(out, (x,), bwd)
