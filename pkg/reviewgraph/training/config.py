""" Provide the ``TrainConfig`` class.

"""


# -- TrainConfig Class -------------------------------------------------------

class TrainConfig(object):
    """ Class to represent the optimization settings.

    """

    defaults = {
        'learning_rate': 1e-4,
        'batch_size': 32,
        'max_epochs': 100,
        'early_stop_patience': 10,
        'beta1': 0.9,
        'beta2': 0.999,
        'epsilon': 1e-8,
        'seed': 0,
        'shuffle': True,
    }

    def __init__(self, **kwargs):
        """
        Keyword Args:
            learning_rate (float): Adam step size. Default is 1e-4.

            batch_size (int): Graphs per optimizer step. Default is 32.

            max_epochs (int): Upper bound on epochs. Default is 100.

            early_stop_patience (int): Non-improving epochs tolerated before
                stopping; at most ``max_epochs``. Default is 10.

            beta1, beta2, epsilon (float): Adam constants. Defaults are 0.9,
                0.999 and 1e-8.

            seed (int): Shuffling seed. Default is 0.

            shuffle (bool): Shuffle the training split every epoch. Default
                is True.

        """
        allowed_keys = list(self.defaults)
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute. The "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))
        for key, value in self.defaults.items():
            setattr(self, key, kwargs.get(key, value))

        # -- Range checks ----------------------------------------------------
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive, not {}."
                             "".format(self.learning_rate))
        for key in ['batch_size', 'max_epochs']:
            if not isinstance(getattr(self, key), int) or \
                    getattr(self, key) < 1:
                raise ValueError("'{}' must be a positive integer, not {!r}."
                                 "".format(key, getattr(self, key)))
        if not isinstance(self.early_stop_patience, int) or \
                not 0 <= self.early_stop_patience <= self.max_epochs:
            raise ValueError("early_stop_patience must be between 0 and "
                             "max_epochs ({}), not {!r}."
                             "".format(self.max_epochs,
                                       self.early_stop_patience))
        for key in ['beta1', 'beta2']:
            if not 0 <= getattr(self, key) < 1:
                raise ValueError("'{}' must be in [0, 1), not {}."
                                 "".format(key, getattr(self, key)))
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive.")

    def to_dict(self):
        return {key: getattr(self, key) for key in self.defaults}

    def replace(self, **kwargs):
        d = self.to_dict()
        d.update(kwargs)
        return TrainConfig(**d)

    def __eq__(self, other):
        return isinstance(other, TrainConfig) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'TrainConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in self.to_dict().items()))
