""" Provide the ``ModelConfig`` class.

"""

# -- Imports -----------------------------------------------------------------
import math

from reviewgraph.graph.schema import (
    GENERIC_NODE_TYPE, NODE_TYPE_ORDER, Relation, RelationType,
    relation_vocabulary)


# -- ModelConfig Class -------------------------------------------------------

class ModelConfig(object):
    """ Class to represent the hyper-parameters of the graph transformer.

    """

    defaults = {
        'hidden_dim': 128,
        'num_heads': 4,
        'num_layers': 2,
        'input_dim': None,
        'ffn_hidden': 128,
        'num_classes': 2,
        'use_inverse_edges': True,
        'attention_scale': 'sqrt_d',
        'homogeneous': False,
        'seed': 0,
    }

    def __init__(self, **kwargs):
        """
        Keyword Args:
            hidden_dim (int): Node representation width d. Default is 128.

            num_heads (int): Attention heads Z; must divide ``hidden_dim``.
                Default is 4.

            num_layers (int): Number of layers L, at least 1. Default is 2.

            input_dim (int): Embedding width; required.

            ffn_hidden (int): Hidden width of the classification head.
                Default is 128.

            num_classes (int): Fixed to 2 (accept, reject).

            use_inverse_edges (bool): Hold parameters for inverse relations.
                Default is True.

            attention_scale (str): 'sqrt_d' (default) or 'sqrt_dh', the
                divisor of the attention scores.

            homogeneous (bool): One node type and the single 'connected'
                relation, for homogenized graphs. Default is False.

            seed (int): Initialization seed. Default is 0.

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
        for key in ['hidden_dim', 'num_heads', 'num_layers', 'ffn_hidden']:
            if not isinstance(getattr(self, key), int) or \
                    getattr(self, key) < 1:
                raise ValueError("'{}' must be a positive integer, not {!r}."
                                 "".format(key, getattr(self, key)))
        if self.input_dim is None:
            raise ValueError("Must specify `input_dim`, the embedding width.")
        if not isinstance(self.input_dim, int) or self.input_dim < 1:
            raise ValueError("'input_dim' must be a positive integer, not "
                             "{!r}.".format(self.input_dim))
        if self.hidden_dim % self.num_heads:
            raise ValueError("hidden_dim ({}) must be divisible by num_heads "
                             "({}).".format(self.hidden_dim, self.num_heads))
        if self.num_classes != 2:
            raise ValueError("Only two classes (accept, reject) are "
                             "supported.")
        if self.attention_scale not in ['sqrt_d', 'sqrt_dh']:
            raise ValueError("'{}' not recognized. Attention scale can only "
                             "be 'sqrt_d' or 'sqrt_dh'."
                             "".format(self.attention_scale))

    # -- Derived values ------------------------------------------------------

    @property
    def head_dim(self):
        return self.hidden_dim // self.num_heads

    @property
    def scale(self):
        if self.attention_scale == 'sqrt_d':
            return math.sqrt(self.hidden_dim)
        return math.sqrt(self.head_dim)

    @property
    def node_types(self):
        """ Node type keys the model holds parameters for. """
        if self.homogeneous:
            return [GENERIC_NODE_TYPE]
        return [t.value for t in NODE_TYPE_ORDER]

    @property
    def relations(self):
        """ Relations the model holds parameters for, in ordinal order. One
        relation is one meta-relation, since every typed relation has a
        single legal pair of endpoint types.

        """
        if self.homogeneous:
            return [Relation(RelationType.CONNECTED)]
        return relation_vocabulary(self.use_inverse_edges)

    @property
    def relation_keys(self):
        return [r.key for r in self.relations]

    # -- Conversion ----------------------------------------------------------

    def to_dict(self):
        return {key: getattr(self, key) for key in self.defaults}

    def replace(self, **kwargs):
        """ Copy with some values changed. """
        d = self.to_dict()
        d.update(kwargs)
        return ModelConfig(**d)

    def __eq__(self, other):
        return isinstance(other, ModelConfig) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'ModelConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in self.to_dict().items()))
