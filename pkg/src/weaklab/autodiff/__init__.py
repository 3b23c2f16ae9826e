from .tensor import Tensor, as_tensor, backward, grad_enabled, no_grad, topo_order, zero_grads
from .ops import (
    add,
    avg_pool2d,
    clip,
    concat,
    conv2d,
    exp,
    hinge,
    l2_normalize,
    leaky_relu,
    log,
    matmul,
    mean,
    mul,
    reshape,
    sigmoid,
    softmax,
    square,
    sub,
    sum_,
    transpose,
)
from .optim import Adam, adam_step
from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import check_gradients, numeric_gradients

__all__ = [
    "Adam",
    "Tensor",
    "adam_step",
    "add",
    "as_tensor",
    "avg_pool2d",
    "backward",
    "check_gradients",
    "clip",
    "concat",
    "conv2d",
    "exp",
    "grad_enabled",
    "hinge",
    "l2_normalize",
    "leaky_relu",
    "load_checkpoint",
    "log",
    "matmul",
    "mean",
    "mul",
    "no_grad",
    "numeric_gradients",
    "reshape",
    "save_checkpoint",
    "sigmoid",
    "softmax",
    "square",
    "sub",
    "sum_",
    "topo_order",
    "transpose",
    "zero_grads",
]
