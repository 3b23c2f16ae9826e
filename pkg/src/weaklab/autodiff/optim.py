"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor


def adam_step(
    value: np.ndarray,
    grad: np.ndarray,
    m: np.ndarray,
    v: np.ndarray,
    t: int,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One Adam update; returns (new_value, new_m, new_v). ``t`` counts from 1."""
    if value.shape != grad.shape:
        raise ValueError(f"adam_step: parameter shape {value.shape} vs gradient shape {grad.shape}")
    m = beta1 * m + (1.0 - beta1) * grad
    v = beta2 * v + (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    new_value = value - lr * m_hat / (np.sqrt(v_hat) + eps)
    return new_value.astype(value.dtype, copy=False), m, v


class Adam:
    """Stateful wrapper applying :func:`adam_step` to a parameter list."""

    def __init__(self, params: list[Tensor], lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m = [np.zeros_like(p.values) for p in params]
        self._v = [np.zeros_like(p.values) for p in params]

    def step(self, grads: list[np.ndarray] | None = None) -> None:
        """Update parameters in place from ``grads`` or the stored ``.grad``s."""
        if grads is None:
            grads = [p.grad if p.grad is not None else np.zeros_like(p.values) for p in self.params]
        self.t += 1
        for i, (p, g) in enumerate(zip(self.params, grads)):
            p.values, self._m[i], self._v[i] = adam_step(
                p.values, g, self._m[i], self._v[i], self.t, self.lr, self.beta1, self.beta2, self.eps
            )
