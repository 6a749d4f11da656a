""" Provide the Adam optimizer.

"""

# -- Imports -----------------------------------------------------------------
import numpy as np

from reviewgraph.exceptions import NonFiniteGradient, ShapeMismatch


class AdamState(object):
    """ First and second moment estimates per parameter, and the step
    count.

    """

    def __init__(self):
        self.m = {}
        self.v = {}
        self.t = 0


def adam_step(params, grads, state, t, config):
    """ Function that applies one Adam update with bias correction, in
    place.

    Args:
        params (ParamStore): Updated in place.

        grads (dict): ``{name: ndarray}``; parameters without an entry (or
            with ``None``) are treated as having zero gradient.

        state (AdamState): Moment estimates, updated in place.

        t (int): Step number, starting at 1.

        config (TrainConfig): ``learning_rate``, ``beta1``, ``beta2`` and
            ``epsilon``.

    Returns:
        tuple: ``(params, state)``

    Raises:
        NonFiniteGradient: If any gradient entry is NaN or infinite; nothing
            is updated in that case.
    """
    if t < 1:
        raise ValueError("Adam step number starts at 1, not {}.".format(t))
    for name, g in grads.items():
        if g is None:
            continue
        if np.shape(g) != params[name].shape:
            raise ShapeMismatch('adam_step', params[name].shape,
                                np.shape(g))
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient("Gradient of '{}' is not finite at step "
                                    "{}.".format(name, t))

    b1, b2 = config.beta1, config.beta2
    lr, eps = config.learning_rate, config.epsilon
    for name, p in params.items():
        g = grads.get(name)
        if g is None:
            g = np.zeros_like(p.data)
        m = state.m.get(name, np.zeros_like(p.data))
        v = state.v.get(name, np.zeros_like(p.data))
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        state.m[name], state.v[name] = m, v
        m_hat = m / (1.0 - b1 ** t)
        v_hat = v / (1.0 - b2 ** t)
        p.data = p.data - lr * m_hat / (np.sqrt(v_hat) + eps)
    state.t = t
    return params, state
