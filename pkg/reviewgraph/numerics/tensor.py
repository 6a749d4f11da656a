""" Provide the ``Tensor`` class and the differentiable operations built on
it.

A ``Tensor`` wraps a float64 ``numpy`` array. When gradients are enabled and
an operand requires them, each operation records its operands and a closure
that maps the output gradient to operand gradients. ``Tensor.backward``
walks that tape in reverse topological order. Gradients accumulate
additively into ``grad``.

"""

# -- Imports -----------------------------------------------------------------
import threading
from contextlib import contextmanager

import numpy as np

from reviewgraph.exceptions import BadLabel, EmptyVector, ShapeMismatch

# Lower clamp of probabilities inside cross_entropy
PROB_FLOOR = 1e-12

_state = threading.local()


def grad_enabled():
    return getattr(_state, 'enabled', True)


@contextmanager
def no_grad():
    """ Context manager for forward passes that record no tape. """
    previous = grad_enabled()
    _state.enabled = False
    try:
        yield
    finally:
        _state.enabled = previous


# -- Tensor Class ------------------------------------------------------------

class Tensor(object):
    """ Class to represent a dense float64 array with an optional gradient.

    """

    def __init__(self, data, requires_grad=False, name=None):
        """
        Args:
            data (array_like): The values. Copied into a float64 array.

        Keyword Args:
            requires_grad (bool): Track gradients for this tensor. Default is
                False.

            name (str): Optional label, used in error messages.

        """
        self.data = np.array(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.name = name
        self.grad = None
        self._parents = ()
        self._backward = None

    # -- Properties ----------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    def numpy(self):
        return self.data

    def item(self):
        if self.data.size != 1:
            raise ShapeMismatch('item', self.shape, (1,))
        return float(self.data.reshape(-1)[0])

    def zero_grad(self):
        self.grad = None

    # -- Backward pass -------------------------------------------------------

    def backward(self, grad=None):
        """ Method that propagates gradients to every tensor on the tape.

        Args:
            grad (array_like): Gradient of the final objective with respect
                to this tensor. Default is 1, which requires a one-element
                tensor.

        """
        if grad is None:
            if self.data.size != 1:
                raise ShapeMismatch('backward', self.shape, (1,))
            grad = np.ones_like(self.data)
        grad = np.asarray(grad, dtype=np.float64)
        if grad.shape != self.shape:
            raise ShapeMismatch('backward', self.shape, grad.shape)

        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))

        grads = {id(self): grad}
        for node in reversed(order):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node._backward is None:
                node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            for parent, pg in zip(node._parents, node._backward(g)):
                if pg is None or not parent.requires_grad:
                    continue
                if id(parent) in grads:
                    grads[id(parent)] = grads[id(parent)] + pg
                else:
                    grads[id(parent)] = pg

    # -- String representation -----------------------------------------------

    def __repr__(self):
        return "Tensor(shape={}, requires_grad={}{})".format(
            self.shape, self.requires_grad,
            ", name='{}'".format(self.name) if self.name else '')


def as_tensor(x):
    """ Wrap arrays and numbers as constant tensors; pass tensors through. """
    if isinstance(x, Tensor):
        return x
    return Tensor(x)


def _result(data, parents, backward):
    """ Build an op output, recording the tape entry only when needed. """
    out = Tensor(data)
    if grad_enabled() and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward
    return out


# -- Linear algebra ----------------------------------------------------------

def matmul(a, b):
    """ Matrix product of two 2-D tensors. """
    a, b = as_tensor(a), as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatch('matmul', a.shape, b.shape)

    def backward(g):
        return g @ b.data.T, a.data.T @ g

    return _result(a.data @ b.data, (a, b), backward)


def add(a, b):
    """ Elementwise sum. ``b`` may also be a single row added to every row of
    ``a`` (a bias).

    """
    a, b = as_tensor(a), as_tensor(b)
    if a.shape == b.shape:
        def backward(g):
            return g, g
    elif (a.data.ndim == 2 and b.data.ndim == 2 and b.shape[0] == 1
          and b.shape[1] == a.shape[1]):
        def backward(g):
            return g, g.sum(axis=0, keepdims=True)
    else:
        raise ShapeMismatch('add', a.shape, b.shape)
    return _result(a.data + b.data, (a, b), backward)


def mul(a, b):
    """ Elementwise product of two tensors of the same shape. """
    a, b = as_tensor(a), as_tensor(b)
    if a.shape != b.shape:
        raise ShapeMismatch('mul', a.shape, b.shape)

    def backward(g):
        return g * b.data, g * a.data

    return _result(a.data * b.data, (a, b), backward)


def mul_rows(x, w):
    """ Multiply row ``i`` of ``x`` (n x m) by ``w[i]`` (w is n x 1). """
    x, w = as_tensor(x), as_tensor(w)
    if (x.data.ndim != 2 or w.data.ndim != 2 or w.shape[1] != 1
            or w.shape[0] != x.shape[0]):
        raise ShapeMismatch('mul_rows', x.shape, w.shape)

    def backward(g):
        return g * w.data, (g * x.data).sum(axis=1, keepdims=True)

    return _result(x.data * w.data, (x, w), backward)


def mul_scalar(x, s):
    """ Multiply ``x`` by a learnable 1 x 1 tensor ``s``. """
    x, s = as_tensor(x), as_tensor(s)
    if s.data.size != 1:
        raise ShapeMismatch('mul_scalar', x.shape, s.shape)
    value = s.data.reshape(-1)[0]

    def backward(g):
        return g * value, np.full(s.shape, (g * x.data).sum())

    return _result(x.data * value, (x, s), backward)


def scale(x, c):
    """ Multiply ``x`` by the constant ``c``. """
    x = as_tensor(x)
    c = float(c)

    def backward(g):
        return (g * c,)

    return _result(x.data * c, (x,), backward)


def relu(x):
    x = as_tensor(x)
    mask = x.data > 0

    def backward(g):
        return (g * mask,)

    # NaN propagates
    return _result(np.maximum(x.data, 0.0), (x,), backward)


# -- Shape operations --------------------------------------------------------

def concat(xs, axis=0):
    """ Concatenate tensors along ``axis`` (0 stacks rows, 1 columns). """
    xs = [as_tensor(x) for x in xs]
    if not xs:
        raise EmptyVector("concat needs at least one tensor.")
    try:
        data = np.concatenate([x.data for x in xs], axis=axis)
    except ValueError:
        raise ShapeMismatch('concat', *[x.shape for x in xs])
    bounds = np.cumsum([x.shape[axis] for x in xs])[:-1]

    def backward(g):
        return np.split(g, bounds, axis=axis)

    return _result(data, xs, backward)


def reshape(x, shape):
    x = as_tensor(x)
    try:
        data = x.data.reshape(shape)
    except ValueError:
        raise ShapeMismatch('reshape', x.shape, tuple(shape))

    def backward(g):
        return (g.reshape(x.shape),)

    return _result(data, (x,), backward)


def gather_rows(x, idx):
    """ Rows ``x[idx]``; repeated indices are allowed. """
    x = as_tensor(x)
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= x.shape[0]):
        raise ShapeMismatch('gather_rows', x.shape, (int(idx.max()),))

    def backward(g):
        gx = np.zeros_like(x.data)
        np.add.at(gx, idx, g)
        return (gx,)

    return _result(x.data[idx], (x,), backward)


def scatter_add_rows(x, idx, n):
    """ Sum row ``i`` of ``x`` into row ``idx[i]`` of an ``n``-row zero
    matrix. Rows are added in index order.

    """
    x = as_tensor(x)
    idx = np.asarray(idx, dtype=np.int64)
    if x.data.ndim != 2 or idx.shape[0] != x.shape[0]:
        raise ShapeMismatch('scatter_add_rows', x.shape, idx.shape)
    out = np.zeros((n, x.shape[1]))
    np.add.at(out, idx, x.data)

    def backward(g):
        return (g[idx],)

    return _result(out, (x,), backward)


def take(x, idx):
    """ Entries ``x.flat[idx]`` as a column (len(idx) x 1). """
    x = as_tensor(x)
    idx = np.asarray(idx, dtype=np.int64)
    flat = x.data.reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= flat.size):
        raise ShapeMismatch('take', x.shape, (int(idx.max()),))

    def backward(g):
        gx = np.zeros(flat.size)
        np.add.at(gx, idx, g.reshape(-1))
        return (gx.reshape(x.shape),)

    return _result(flat[idx].reshape(-1, 1), (x,), backward)


# -- Reductions --------------------------------------------------------------

def sum_cols(x):
    """ Row sums of a 2-D tensor, as a column. """
    x = as_tensor(x)

    def backward(g):
        return (np.broadcast_to(g, x.shape).copy(),)

    return _result(x.data.sum(axis=1, keepdims=True), (x,), backward)


def mean_rows(x):
    """ Mean over the rows of a 2-D tensor, as a single row. """
    x = as_tensor(x)
    if x.data.ndim != 2 or x.shape[0] == 0:
        raise EmptyVector("mean_rows needs at least one row, got shape {}."
                          "".format(x.shape))
    n = x.shape[0]

    def backward(g):
        return (np.repeat(g / n, n, axis=0),)

    return _result(x.data.mean(axis=0, keepdims=True), (x,), backward)


# -- Softmax and loss --------------------------------------------------------

def softmax(v):
    """ Softmax of a vector (1-D, or a single row), computed after
    subtracting the maximum.

    """
    v = as_tensor(v)
    if v.data.size == 0:
        raise EmptyVector("softmax of an empty vector.")
    if v.data.ndim == 2 and v.shape[0] != 1:
        raise ShapeMismatch('softmax', v.shape, (1, v.shape[1]))
    e = np.exp(v.data - v.data.max())
    s = e / e.sum()

    def backward(g):
        return (s * (g - (g * s).sum()),)

    return _result(s, (v,), backward)


def segment_softmax(scores, segments, n_segments):
    """ Softmax over the rows that share a segment id, separately for every
    column. With one row per edge and the target id as segment, this
    normalizes attention over each target's incoming edges, per head.

    Args:
        scores (Tensor): E x k scores.

        segments (array_like): E segment ids in ``[0, n_segments)``.

        n_segments (int): Number of segments.

    Returns:
        Tensor: E x k weights.
    """
    scores = as_tensor(scores)
    seg = np.asarray(segments, dtype=np.int64)
    if scores.data.ndim != 2 or seg.shape[0] != scores.shape[0]:
        raise ShapeMismatch('segment_softmax', scores.shape, seg.shape)
    k = scores.shape[1]
    top = np.full((n_segments, k), -np.inf)
    np.maximum.at(top, seg, scores.data)
    e = np.exp(scores.data - top[seg])
    total = np.zeros((n_segments, k))
    np.add.at(total, seg, e)
    s = e / total[seg]

    def backward(g):
        dot = np.zeros((n_segments, k))
        np.add.at(dot, seg, g * s)
        return (s * (g - dot[seg]),)

    return _result(s, (scores,), backward)


def cross_entropy(probs, label):
    """ ``-log(probs[label])`` with the probability clamped at
    ``PROB_FLOOR``.

    Args:
        probs (Tensor): A probability vector (1-D or a single row).

        label (int): The class index.

    Returns:
        Tensor: A 1 x 1 loss.
    """
    probs = as_tensor(probs)
    flat = probs.data.reshape(-1)
    if (isinstance(label, bool) or not isinstance(label, (int, np.integer))
            or label < 0 or label >= flat.size):
        raise BadLabel("Label {!r} is not a class index in [0, {})."
                       "".format(label, flat.size))
    p = flat[label]
    clamped = p < PROB_FLOOR

    def backward(g):
        gp = np.zeros(flat.size)
        if not clamped:
            gp[label] = -g.reshape(-1)[0] / p
        return (gp.reshape(probs.shape),)

    return _result(np.array([[-np.log(max(p, PROB_FLOOR))]]), (probs,),
                   backward)
