"""Central-difference gradient checking.

Builds the graph in float64; float32 forward paths are too noisy for the
h = 1e-5 step used here.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .tensor import Tensor, backward, zero_grads


def numeric_gradients(
    fn: Callable[..., Tensor],
    inputs: Sequence[np.ndarray],
    h: float = 1e-5,
) -> list[np.ndarray]:
    """Central differences of a scalar-valued ``fn`` w.r.t. every input entry."""
    grads = []
    for i in range(len(inputs)):
        base = inputs[i].astype(np.float64)
        g = np.zeros_like(base)
        flat = g.reshape(-1)
        for j in range(base.size):
            bumped = [x.astype(np.float64).copy() for x in inputs]
            bumped[i].reshape(-1)[j] += h
            hi = float(fn(*[Tensor(b, dtype=np.float64) for b in bumped]).values)
            bumped[i].reshape(-1)[j] -= 2 * h
            lo = float(fn(*[Tensor(b, dtype=np.float64) for b in bumped]).values)
            flat[j] = (hi - lo) / (2 * h)
        grads.append(g)
    return grads


def check_gradients(
    fn: Callable[..., Tensor],
    inputs: Sequence[np.ndarray],
    h: float = 1e-5,
    rtol: float = 1e-4,
    atol: float = 1e-7,
) -> float:
    """Compare reverse-mode and numeric gradients; returns the worst relative error.

    Raises AssertionError when any entry disagrees beyond rtol (relative to the
    larger magnitude, with ``atol`` shielding near-zero entries).
    """
    tensors = [Tensor(np.asarray(x, dtype=np.float64), requires_grad=True) for x in inputs]
    loss = fn(*tensors)
    zero_grads(tensors)
    analytic = backward(loss, params=tensors)
    numeric = numeric_gradients(fn, [np.asarray(x) for x in inputs], h=h)
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), atol / rtol)
        rel = np.abs(a - n) / denom
        worst = max(worst, float(rel.max()) if rel.size else 0.0)
        if not np.all(rel <= rtol):
            idx = np.unravel_index(int(rel.argmax()), rel.shape) if rel.ndim else ()
            raise AssertionError(
                f"gradient mismatch at {idx}: analytic={a[idx]!r} numeric={n[idx]!r} rel={rel.max():.3g}"
            )
    return worst
