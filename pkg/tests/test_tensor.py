import numpy as np
import pytest

from .context import reviewgraph  # noqa: F401
from reviewgraph.exceptions import BadLabel, EmptyVector, ShapeMismatch
from reviewgraph.numerics import tensor as nt
from reviewgraph.numerics.tensor import Tensor, no_grad


def numeric_grad(f, x, eps=1e-6):
    """ Central differences of the scalar ``f`` around the array ``x``. """
    g = np.zeros_like(x)
    for idx in np.ndindex(*x.shape):
        original = x[idx]
        x[idx] = original + eps
        plus = f(x)
        x[idx] = original - eps
        minus = f(x)
        x[idx] = original
        g[idx] = (plus - minus) / (2 * eps)
    return g


def check_op(op, *shapes, seed=0, weights=None):
    """ Compare the tape gradient of ``sum(w * op(inputs))`` against
    finite differences, for every input.

    """
    rng = np.random.default_rng(seed)
    arrays = [rng.standard_normal(s) for s in shapes]
    out = op(*[Tensor(a) for a in arrays])
    w = rng.standard_normal(out.shape) if weights is None else weights

    tensors = [Tensor(a.copy(), requires_grad=True) for a in arrays]
    op(*tensors).backward(w)

    for i, a in enumerate(arrays):
        def f(x, i=i):
            args = [Tensor(x) if j == i else Tensor(arrays[j])
                    for j in range(len(arrays))]
            return float((op(*args).data * w).sum())
        np.testing.assert_allclose(tensors[i].grad,
                                   numeric_grad(f, a.copy()),
                                   rtol=1e-5, atol=1e-7)


def test_matmul():
    check_op(nt.matmul, (3, 4), (4, 2))


def test_add_and_bias():
    check_op(nt.add, (3, 4), (3, 4))
    check_op(nt.add, (3, 4), (1, 4))


def test_mul():
    check_op(nt.mul, (2, 5), (2, 5))


def test_mul_rows():
    check_op(nt.mul_rows, (4, 3), (4, 1))


def test_mul_scalar():
    check_op(nt.mul_scalar, (3, 2), (1, 1))


def test_scale_and_relu():
    check_op(lambda x: nt.scale(x, -2.5), (3, 3))
    check_op(nt.relu, (4, 4), seed=3)


def test_relu_values():
    np.testing.assert_array_equal(nt.relu([[-1.0, 0.0, 2.0]]).data,
                                  [[0.0, 0.0, 2.0]])
    assert np.isnan(nt.relu([[np.nan, 1.0]]).data[0, 0])


def test_concat():
    check_op(lambda a, b: nt.concat([a, b], axis=0), (2, 3), (1, 3))
    check_op(lambda a, b: nt.concat([a, b], axis=1), (2, 3), (2, 2))


def test_reshape():
    check_op(lambda x: nt.reshape(x, (6, 2)), (3, 4))


def test_gather_repeated_rows():
    check_op(lambda x: nt.gather_rows(x, [2, 0, 2, 2]), (3, 2))


def test_scatter_add_rows():
    check_op(lambda x: nt.scatter_add_rows(x, [1, 1, 0, 3], 5), (4, 2))


def test_take():
    check_op(lambda x: nt.take(x, [0, 3, 3]), (1, 4))


def test_reductions():
    check_op(nt.sum_cols, (3, 4))
    check_op(nt.mean_rows, (5, 2))


def test_softmax():
    check_op(nt.softmax, (1, 5))
    s = nt.softmax(Tensor([[1000.0, 1000.0]]))
    np.testing.assert_almost_equal(s.data, [[0.5, 0.5]])


def test_segment_softmax():
    segments = [0, 2, 0, 2, 2]
    check_op(lambda x: nt.segment_softmax(x, segments, 3), (5, 2))

    s = nt.segment_softmax(Tensor(np.arange(10.0).reshape(5, 2)), segments,
                           3).data
    np.testing.assert_almost_equal(s[[0, 2]].sum(axis=0), [1.0, 1.0])
    np.testing.assert_almost_equal(s[[1, 3, 4]].sum(axis=0), [1.0, 1.0])


def test_cross_entropy():
    check_op(lambda p: nt.cross_entropy(nt.softmax(p), 1), (1, 2),
             weights=np.ones((1, 1)))
    loss = nt.cross_entropy(Tensor([[0.25, 0.75]]), 0)
    np.testing.assert_almost_equal(loss.item(), np.log(4.0))


def test_cross_entropy_floor():
    loss = nt.cross_entropy(Tensor([[1.0, 0.0]]), 1)
    assert np.isfinite(loss.item())
    np.testing.assert_almost_equal(loss.item(), -np.log(nt.PROB_FLOOR))


def test_shared_operand_accumulates():
    x = Tensor([[1.0, 2.0]], requires_grad=True)
    nt.sum_cols(nt.mul(x, x)).backward()
    np.testing.assert_almost_equal(x.grad, [[2.0, 4.0]])


def test_no_grad():
    x = Tensor([[1.0]], requires_grad=True)
    with no_grad():
        y = nt.scale(x, 2.0)
    assert not y.requires_grad
    assert y._parents == ()


def test_errors():
    with pytest.raises(ShapeMismatch):
        nt.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
    with pytest.raises(EmptyVector):
        nt.softmax(Tensor(np.zeros(0)))
    with pytest.raises(EmptyVector):
        nt.mean_rows(Tensor(np.zeros((0, 3))))
    with pytest.raises(BadLabel):
        nt.cross_entropy(Tensor([[0.5, 0.5]]), 2)
    with pytest.raises(BadLabel):
        nt.cross_entropy(Tensor([[0.5, 0.5]]), True)
