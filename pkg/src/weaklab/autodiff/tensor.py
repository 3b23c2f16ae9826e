"""Reverse-mode autodiff over dense numpy arrays.

A ``Tensor`` wraps an ndarray plus the bookkeeping needed for reverse-mode
differentiation: references to its parent tensors and a closure that maps the
output gradient to parent gradients. The graph of these references is the
tape; ``backward`` walks it once in reverse topological order.

Storage defaults to float32. Reductions accumulate in float64 (see ops.py).
Gradient checks should build their graphs in float64 for meaningful
finite-difference comparisons.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Callable, Iterator, Sequence

import numpy as np

FloatArray = np.ndarray

_grad_enabled = True


@contextmanager
def no_grad() -> Iterator[None]:
    """Disable graph construction inside the block (inference mode)."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


def grad_enabled() -> bool:
    return _grad_enabled


class Tensor:
    """Dense tensor with optional gradient tracking."""

    __slots__ = ("values", "requires_grad", "grad", "_parents", "_backward")

    def __init__(
        self,
        values,
        requires_grad: bool = False,
        dtype=None,
        _parents: tuple = (),
        _backward: Callable[[FloatArray], tuple] | None = None,
    ):
        arr = np.asarray(values)
        if dtype is not None:
            arr = arr.astype(dtype, copy=False)
        elif arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float32)
        self.values = arr
        self.requires_grad = requires_grad
        self.grad: FloatArray | None = None
        self._parents = _parents
        self._backward = _backward

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def dtype(self):
        return self.values.dtype

    @property
    def size(self) -> int:
        return self.values.size

    def item(self) -> float:
        return float(self.values)

    def detach(self) -> "Tensor":
        return Tensor(self.values, requires_grad=False)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, requires_grad={self.requires_grad})"

    # operator sugar; the actual primitives live in ops.py
    def __add__(self, other):
        from . import ops

        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from . import ops

        return ops.mul(self, -1.0)

    def __matmul__(self, other):
        from . import ops

        return ops.matmul(self, other)

    def reshape(self, *shape):
        from . import ops

        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return ops.reshape(self, shape)


def as_tensor(x, like: Tensor | None = None) -> Tensor:
    """Wrap plain values as a constant Tensor, matching dtype of ``like``."""
    if isinstance(x, Tensor):
        return x
    dtype = like.dtype if like is not None else None
    return Tensor(x, dtype=dtype)


def make_node(values: FloatArray, parents: Sequence[Tensor], backward: Callable) -> Tensor:
    """Create an op output, recording the tape edge only when needed."""
    if _grad_enabled and any(p.requires_grad for p in parents):
        return Tensor(values, requires_grad=True, _parents=tuple(parents), _backward=backward)
    return Tensor(values)


def topo_order(root: Tensor) -> list[Tensor]:
    """Tensors reachable from ``root``, parents before children."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if id(p) not in seen:
                stack.append((p, False))
    return order


def backward(loss: Tensor, params: Sequence[Tensor] | None = None) -> list[FloatArray] | None:
    """Populate ``.grad`` on every reachable tensor with requires_grad.

    ``loss`` must be scalar (size 1). If ``params`` is given, returns their
    gradients in order, with zeros for parameters the graph never reached.
    A second backward through the same graph raises; rebuild the graph
    instead of reusing it.
    """
    if loss.size != 1:
        raise ValueError(f"backward needs a scalar loss, got shape {loss.shape}")
    if not loss.requires_grad:
        raise ValueError("loss is not connected to any tensor with requires_grad=True")
    if loss._backward is None and not loss._parents:
        raise ValueError("loss has no recorded operations to differentiate")

    order = topo_order(loss)
    grads: dict[int, FloatArray] = {id(loss): np.ones_like(loss.values)}
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if node.requires_grad and node._backward is None:
            # leaf tensor
            node.grad = g if node.grad is None else node.grad + g
            continue
        if node._backward is None:
            continue
        parent_grads = node._backward(g)
        for p, pg in zip(node._parents, parent_grads):
            if pg is None:
                continue
            key = id(p)
            if key in grads:
                grads[key] = grads[key] + pg
            else:
                grads[key] = pg
        # consume the edge so a second pass fails loudly
        node._backward = _already_consumed
    if params is not None:
        out = []
        for p in params:
            out.append(p.grad if p.grad is not None else np.zeros_like(p.values))
        return out
    return None


def _already_consumed(_g):
    raise RuntimeError(
        "backward was already called through this graph; rebuild the forward pass before differentiating again"
    )


def zero_grads(params: Sequence[Tensor]) -> None:
    for p in params:
        p.grad = None
