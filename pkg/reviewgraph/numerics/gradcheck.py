""" Compare reverse-mode gradients against central finite differences.

"""

# -- Imports -----------------------------------------------------------------
import logging

import numpy as np

from reviewgraph.exceptions import NonFiniteLoss
from reviewgraph.numerics.tensor import no_grad

logger = logging.getLogger(__name__)


class GradCheckReport(object):
    """ Result of :func:`grad_check_report`.

    Attributes:
        max_rel_error (float): Largest relative error over all entries.
        worst_param (str): Name of the parameter holding it.
        worst_index (tuple): Index of the entry inside that parameter.
        per_param (dict): Largest relative error per parameter.
        skipped (list): Parameters the loss does not depend on.
        entries (int): Number of entries compared.
    """

    def __init__(self):
        self.max_rel_error = 0.0
        self.worst_param = None
        self.worst_index = None
        self.per_param = {}
        self.skipped = []
        self.entries = 0

    def passed(self, tolerance):
        return self.max_rel_error < tolerance

    def __str__(self):
        return ("max relative error {:.3e} at {}{} over {} entries ({} "
                "parameters skipped)".format(self.max_rel_error,
                                             self.worst_param,
                                             list(self.worst_index or ()),
                                             self.entries, len(self.skipped)))


def _loss_value(f, params):
    value = f(params)
    value = float(np.asarray(getattr(value, 'data', value)).reshape(-1)[0])
    if not np.isfinite(value):
        raise NonFiniteLoss("Loss is not finite: {}".format(value))
    return value


def grad_check_report(f, params, eps=1e-5, names=None):
    """ Function that checks the gradient of ``f`` entry by entry.

    The relative error of an entry is
    ``|analytic - numeric| / max(1, |analytic|, |numeric|)`` with the
    numeric gradient ``(f(t + eps) - f(t - eps)) / (2 eps)``. Parameters the
    tape never reaches keep ``grad = None`` and are skipped.

    Args:
        f (callable): Maps the ``ParamStore`` to a one-element loss tensor.

        params (ParamStore): Parameters; values are restored afterwards.

    Keyword Args:
        eps (float): Finite-difference step. Default is 1e-5.

        names (list): Restrict the check to these parameters.

    Returns:
        GradCheckReport

    Raises:
        NonFiniteLoss: If any evaluation of ``f`` is not finite.
    """
    params.zero_grad()
    loss = f(params)
    if not np.all(np.isfinite(loss.data)):
        raise NonFiniteLoss("Loss is not finite: {}".format(loss.data))
    loss.backward()

    report = GradCheckReport()
    for name in (names if names is not None else params.names()):
        t = params[name]
        if t.grad is None:
            report.skipped.append(name)
            continue
        analytic = t.grad.copy()
        worst = 0.0
        with no_grad():
            for idx in np.ndindex(*t.shape):
                original = t.data[idx]
                t.data[idx] = original + eps
                plus = _loss_value(f, params)
                t.data[idx] = original - eps
                minus = _loss_value(f, params)
                t.data[idx] = original
                numeric = (plus - minus) / (2.0 * eps)
                err = abs(analytic[idx] - numeric) / max(
                    1.0, abs(analytic[idx]), abs(numeric))
                report.entries += 1
                if err > worst:
                    worst = err
                if err > report.max_rel_error:
                    report.max_rel_error = err
                    report.worst_param = name
                    report.worst_index = idx
        report.per_param[name] = worst

    params.zero_grad()
    logger.info("Gradient check: %s", report)
    return report


def grad_check(f, params, eps=1e-5):
    """ Return the largest relative gradient error of ``f`` at ``params``.
    See :func:`grad_check_report`.

    """
    return grad_check_report(f, params, eps=eps).max_rel_error
