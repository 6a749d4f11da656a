""" Provide the ``ParamStore`` class, the ordered collection of learnable
tensors.

"""

# -- Imports -----------------------------------------------------------------
from collections import OrderedDict

import numpy as np

from reviewgraph.exceptions import ShapeMismatch
from reviewgraph.numerics.tensor import Tensor


def glorot_uniform(rng, fan_in, fan_out):
    """ Draw a ``fan_in`` x ``fan_out`` matrix from
    U(-sqrt(6 / (fan_in + fan_out)), +sqrt(6 / (fan_in + fan_out))).

    """
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


# -- ParamStore Class --------------------------------------------------------

class ParamStore(object):
    """ Class to represent an ordered map of parameter names to tensors.
    Iteration follows insertion order, which fixes the checkpoint layout.

    """

    def __init__(self):
        self._tensors = OrderedDict()

    def add(self, name, value):
        """ Register a new parameter.

        Args:
            name (str): Unique parameter name.

            value (array_like): Initial value.

        Returns:
            Tensor: The registered tensor (``requires_grad=True``).
        """
        if name in self._tensors:
            raise KeyError("Parameter '{}' already exists.".format(name))
        t = Tensor(value, requires_grad=True, name=name)
        self._tensors[name] = t
        return t

    def __getitem__(self, name):
        return self._tensors[name]

    def __contains__(self, name):
        return name in self._tensors

    def __iter__(self):
        return iter(self._tensors)

    def __len__(self):
        return len(self._tensors)

    def names(self):
        return list(self._tensors)

    def items(self):
        return self._tensors.items()

    def zero_grad(self):
        for t in self._tensors.values():
            t.zero_grad()

    def count(self, prefix=''):
        """ Number of scalar entries in parameters whose name starts with
        ``prefix``.

        """
        return int(sum(t.data.size for n, t in self._tensors.items()
                       if n.startswith(prefix)))

    def arrays(self):
        """ Copies of the values as an ordered ``{name: ndarray}``. """
        return OrderedDict((n, t.data.copy())
                           for n, t in self._tensors.items())

    def load_arrays(self, arrays):
        """ Overwrite values in place from ``{name: ndarray}``.

        Raises:
            KeyError: On a missing or unknown name.
            ShapeMismatch: On a shape change.
        """
        if list(arrays) != list(self._tensors):
            missing = set(self._tensors) ^ set(arrays)
            raise KeyError("Parameter names differ: {}".format(
                sorted(missing)[:5]))
        for n, value in arrays.items():
            value = np.asarray(value, dtype=np.float64)
            if value.shape != self._tensors[n].shape:
                raise ShapeMismatch(n, self._tensors[n].shape, value.shape)
            self._tensors[n].data = value.copy()
        return self

    def all_finite(self):
        return all(np.all(np.isfinite(t.data))
                   for t in self._tensors.values())

    def __repr__(self):
        return "ParamStore({} tensors, {} values)".format(len(self),
                                                          self.count())
