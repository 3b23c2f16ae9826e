"""Gradient and optimizer checks for the tensor core.

Every primitive gets randomized central-difference checks (20 instances,
h = 1e-5, relative tolerance 1e-4, graphs built in float64). Inputs are
sampled away from the kinks of the non-smooth ops (hinge, leaky_relu, clip,
pointwise max inside l2_normalize) so the two-sided difference is valid.
"""

import numpy as np
import pytest

import weaklab.autodiff as ad
from weaklab.autodiff import Tensor

N_INSTANCES = 20
RNG = np.random.default_rng(20240711)


def _away_from(rng, shape, kink=0.0, margin=0.05, scale=1.0):
    x = rng.uniform(margin, scale, size=shape)
    sign = rng.choice([-1.0, 1.0], size=shape)
    return kink + sign * x


def _scalarize(t):
    return ad.sum_(ad.mul(t, np.arange(1, t.size + 1, dtype=np.float64).reshape(t.shape) / t.size))


@pytest.mark.parametrize("trial", range(N_INSTANCES))
def test_elementwise_and_reduction_gradients(trial):
    rng = np.random.default_rng(1000 + trial)
    a = rng.normal(size=(3, 4))
    b = rng.normal(size=(3, 4))
    row = rng.normal(size=(1, 4))

    ad.check_gradients(lambda x, y: _scalarize(ad.add(x, y)), [a, b])
    ad.check_gradients(lambda x, y: _scalarize(ad.sub(x, y)), [a, b])
    ad.check_gradients(lambda x, y: _scalarize(ad.mul(x, y)), [a, b])
    # broadcasting path
    ad.check_gradients(lambda x, y: _scalarize(ad.add(x, y)), [a, row])
    ad.check_gradients(lambda x: _scalarize(ad.square(x)), [a])
    ad.check_gradients(lambda x: _scalarize(ad.exp(x)), [a * 0.5])
    ad.check_gradients(lambda x: _scalarize(ad.log(x)), [np.abs(a) + 0.5])
    ad.check_gradients(lambda x: ad.sum_(x), [a])
    ad.check_gradients(lambda x: _scalarize(ad.sum_(x, axis=1)), [a])
    ad.check_gradients(lambda x: ad.mean(x), [a])
    ad.check_gradients(lambda x: _scalarize(ad.mean(x, axis=0, keepdims=True)), [a])


@pytest.mark.parametrize("trial", range(N_INSTANCES))
def test_nonlinearity_gradients(trial):
    rng = np.random.default_rng(2000 + trial)
    a = _away_from(rng, (3, 5))

    ad.check_gradients(lambda x: _scalarize(ad.leaky_relu(x, 0.01)), [a])
    ad.check_gradients(lambda x: _scalarize(ad.hinge(x)), [a])
    ad.check_gradients(lambda x: _scalarize(ad.sigmoid(x)), [rng.normal(size=(3, 5))])
    ad.check_gradients(lambda x: _scalarize(ad.softmax(x, axis=1)), [rng.normal(size=(3, 5))])
    # keep entries away from the clamp edges at -1 / 1
    inside = rng.uniform(-0.9, 0.9, size=(3, 5))
    outside = inside + np.where(inside > 0, 0.4, -0.4)
    ad.check_gradients(lambda x: _scalarize(ad.clip(x, -1.0, 1.0)), [outside])
    # unit-scale rows are far from the eps branch of l2_normalize
    ad.check_gradients(lambda x: _scalarize(ad.l2_normalize(x, axis=1)), [rng.normal(size=(3, 5)) + 0.1])


@pytest.mark.parametrize("trial", range(N_INSTANCES))
def test_matmul_shape_ops_gradients(trial):
    rng = np.random.default_rng(3000 + trial)
    a = rng.normal(size=(3, 4))
    b = rng.normal(size=(4, 2))

    ad.check_gradients(lambda x, y: _scalarize(ad.matmul(x, y)), [a, b])
    ad.check_gradients(lambda x: _scalarize(ad.reshape(x, (4, 3))), [a])
    ad.check_gradients(lambda x: _scalarize(ad.transpose(x, (1, 0))), [a])
    c = rng.normal(size=(2, 4))
    ad.check_gradients(lambda x, y: _scalarize(ad.concat([x, y], axis=0)), [a, c])


@pytest.mark.parametrize("trial", range(N_INSTANCES))
def test_conv_and_pool_gradients(trial):
    rng = np.random.default_rng(4000 + trial)
    x = rng.normal(size=(2, 2, 5, 5))
    w = rng.normal(size=(3, 2, 3, 3)) * 0.5

    ad.check_gradients(lambda a, b: _scalarize(ad.conv2d(a, b)), [x, w])
    ad.check_gradients(lambda a: _scalarize(ad.avg_pool2d(a, 2)), [x])
    odd = rng.normal(size=(1, 1, 5, 7))
    ad.check_gradients(lambda a: _scalarize(ad.avg_pool2d(a, 2)), [odd])


def test_conv2d_matches_direct_convolution():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(1, 2, 5, 5))
    w = rng.normal(size=(3, 2, 3, 3))
    out = ad.conv2d(Tensor(x, dtype=np.float64), Tensor(w, dtype=np.float64)).values
    xp = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    ref = np.zeros((1, 3, 5, 5))
    for o in range(3):
        for i in range(5):
            for j in range(5):
                ref[0, o, i, j] = (xp[0, :, i : i + 3, j : j + 3] * w[o]).sum()
    assert np.allclose(out, ref, atol=1e-12)


def test_sigmoid_analytic_point():
    t = Tensor(np.zeros(1), requires_grad=True, dtype=np.float64)
    y = ad.sigmoid(t)
    assert y.values[0] == pytest.approx(0.5)
    ad.backward(ad.sum_(y))
    assert t.grad[0] == pytest.approx(0.25)


def test_l2_normalize_of_unit_vector_is_identity():
    v = np.zeros(4)
    v[1] = 1.0
    out = ad.l2_normalize(Tensor(v, dtype=np.float64), axis=0)
    assert np.array_equal(out.values, v)


def test_backward_of_sum_gives_ones():
    p = Tensor(np.arange(6, dtype=np.float64).reshape(2, 3), requires_grad=True)
    ad.backward(ad.sum_(p))
    assert np.array_equal(p.grad, np.ones((2, 3)))


def test_backward_requires_scalar_loss():
    p = Tensor(np.ones(3), requires_grad=True)
    y = ad.square(p)
    with pytest.raises(ValueError, match="scalar"):
        ad.backward(y)


def test_unreached_parameters_get_zero_gradient():
    used = Tensor(np.ones(2), requires_grad=True)
    unused = Tensor(np.ones(3), requires_grad=True)
    grads = ad.backward(ad.sum_(ad.square(used)), params=[used, unused])
    assert np.array_equal(grads[0], 2 * np.ones(2))
    assert np.array_equal(grads[1], np.zeros(3))


def test_second_backward_through_same_graph_raises():
    p = Tensor(np.ones(2), requires_grad=True)
    loss = ad.sum_(ad.square(p))
    ad.backward(loss)
    with pytest.raises(RuntimeError, match="already"):
        ad.backward(loss)


def test_backward_is_linear_over_loss_sum():
    rng = np.random.default_rng(11)
    base = rng.normal(size=(4, 3))

    def grads_of(fn):
        p = Tensor(base, requires_grad=True, dtype=np.float64)
        ad.backward(fn(p))
        return p.grad

    g1 = grads_of(lambda p: ad.sum_(ad.square(p)))
    g2 = grads_of(lambda p: ad.mean(ad.sigmoid(p)))
    g12 = grads_of(lambda p: ad.add(ad.sum_(ad.square(p)), ad.mean(ad.sigmoid(p))))
    assert np.allclose(g12, g1 + g2, atol=1e-12)


def test_no_grad_blocks_graph_construction():
    p = Tensor(np.ones(2), requires_grad=True)
    with ad.no_grad():
        y = ad.square(p)
    assert not y.requires_grad
    with pytest.raises(ValueError):
        ad.backward(ad.sum_(y))


def test_shape_mismatch_reports_both_shapes():
    a = Tensor(np.ones((2, 3)))
    b = Tensor(np.ones((4, 5)))
    with pytest.raises(ValueError, match=r"\(2, 3\).*\(4, 5\)"):
        ad.matmul(a, b)
    with pytest.raises(ValueError, match=r"\(2, 3\).*\(4, 5\)"):
        ad.add(a, b)


class TestAdam:
    def test_zero_gradient_leaves_parameters_unchanged(self):
        p = Tensor(np.array([1.0, -2.0], dtype=np.float32), requires_grad=True)
        opt = ad.Adam([p], lr=1e-2)
        before = p.values.copy()
        for _ in range(5):
            opt.step([np.zeros(2, dtype=np.float32)])
        assert np.array_equal(p.values, before)

    def test_zero_learning_rate_is_a_no_op(self):
        p = Tensor(np.array([1.0, -2.0], dtype=np.float32), requires_grad=True)
        opt = ad.Adam([p], lr=0.0)
        before = p.values.copy()
        opt.step([np.ones(2, dtype=np.float32)])
        assert np.array_equal(p.values, before)

    def test_constant_gradient_update_approaches_lr_times_sign(self):
        lr = 1e-3
        p = Tensor(np.array([0.0, 0.0], dtype=np.float64), requires_grad=True)
        opt = ad.Adam([p], lr=lr)
        g = np.array([0.37, -2.5])
        prev = p.values.copy()
        for _ in range(3000):
            prev = p.values.copy()
            opt.step([g])
        step = p.values - prev
        assert np.allclose(step, -lr * np.sign(g), rtol=1e-3)

    def test_shape_mismatch_raises(self):
        with pytest.raises(ValueError, match="shape"):
            ad.adam_step(np.zeros(3), np.zeros(4), np.zeros(3), np.zeros(3), 1)


def test_training_trajectory_is_deterministic():
    def run():
        rng = np.random.default_rng(5)
        w = Tensor(rng.normal(size=(4, 2)).astype(np.float32), requires_grad=True)
        opt = ad.Adam([w], lr=1e-2)
        data = rng.normal(size=(8, 4)).astype(np.float32)
        for _ in range(20):
            ad.zero_grads([w])
            loss = ad.mean(ad.square(ad.matmul(Tensor(data), w)))
            ad.backward(loss)
            opt.step()
        return w.values.copy()

    assert np.array_equal(run(), run())


def test_checkpoint_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    named = [
        ("conv1.w", rng.normal(size=(4, 1, 3, 3)).astype(np.float32)),
        ("head.b", rng.normal(size=(10,)).astype(np.float64)),
        ("scalarish", np.float32(2.5).reshape(())),
    ]
    path = tmp_path / "model.bin"
    ad.save_checkpoint(path, named)
    loaded = ad.load_checkpoint(path)
    assert list(loaded) == [n for n, _ in named]
    for name, arr in named:
        assert loaded[name].dtype == arr.dtype
        assert np.array_equal(loaded[name], arr)


def test_checkpoint_rejects_other_files(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 16)
    with pytest.raises(ValueError, match="not a checkpoint"):
        ad.load_checkpoint(path)
