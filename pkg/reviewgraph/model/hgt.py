""" Provide the heterogeneous graph transformer: parameter initialization,
input featurization, the attention, message and aggregation steps of one
layer, type-wise pooling and the classification head.

Conventions: node representations are rows, so a projection of node ``v``
is ``H[v] @ W``. For an edge ``(s, r, t)`` and head ``i``::

    K_i(s)  = H[s] @ K[l, i, type(s)]                      (1 x d_h)
    Q_i(t)  = H[t] @ Q[l, i, type(t)]
    score_i = (K_i(s) @ W_attn[l, r]) . Q_i(t) * mu[l, r] / scale
    att_i   = softmax of score_i over the incoming edges of t
    msg_i   = (H[s] @ M[l, i, type(s)]) @ W_msg[l, r]
    H~[t]   = sum over incoming edges of [att_1 msg_1 | ... | att_Z msg_Z]
    H'[t]   = (lambda[l, type(t)] * H~[t]) @ A[l, type(t)] + H[t]

The classifier mean-pools the last layer per node type, concatenates the
four pools in the fixed order (title, evaluation_dimension,
reviewer_opinion, author_opinion) and applies
``softmax(relu(h @ W1 + b1) @ W2 + b2)``. An empty type pools to zeros.

"""

# -- Imports -----------------------------------------------------------------
from collections.abc import Mapping

import numpy as np

from reviewgraph import content_hash
from reviewgraph.exceptions import BadLabel, DimMismatch, MissingEmbedding
from reviewgraph.graph.schema import NODE_TYPE_ORDER
from reviewgraph.numerics import tensor as nt
from reviewgraph.numerics.params import ParamStore, glorot_uniform
from reviewgraph.numerics.tensor import Tensor, no_grad

# Class index order of the output probabilities
CLASSES = ['accept', 'reject']


def label_index(label):
    """ Class index of a decision label ('accept' is 0, 'reject' is 1). """
    try:
        return CLASSES.index(label)
    except ValueError:
        raise BadLabel("'{}' is not a decision. Options are: {}"
                       "".format(label, CLASSES))


# -- Parameters --------------------------------------------------------------

class HgtParams(ParamStore):
    """ The learnable tensors of one model, with the config that shaped
    them.

    """

    def __init__(self, config):
        super().__init__()
        self.config = config


def init_params(config, rng_seed=None):
    """ Function that creates every learnable tensor. Weight matrices are
    Glorot-uniform, biases zero, the priors ``mu`` and rescale factors
    ``lambda`` one.

    Parameter names::

        input.<type>                     d_emb x d
        layer<l>.{K,Q,M}.<type>.head<i>  d x d_h
        layer<l>.W_attn.<relation>       d_h x d_h
        layer<l>.W_msg.<relation>        d_h x d_h
        layer<l>.mu                      1 x |relations|
        layer<l>.A.<type>                d x d
        layer<l>.lambda                  1 x |types|
        head.W1, head.b1, head.W2, head.b2

    Args:
        config (ModelConfig): The model shape.

        rng_seed (int): Seed; defaults to ``config.seed``.

    Returns:
        HgtParams
    """
    rng = np.random.default_rng(config.seed if rng_seed is None
                                else rng_seed)
    d, dh, z = config.hidden_dim, config.head_dim, config.num_heads
    types, relations = config.node_types, config.relation_keys
    p = HgtParams(config)

    for a in types:
        p.add('input.{}'.format(a), glorot_uniform(rng, config.input_dim, d))

    for l in range(config.num_layers):
        for kind in ['K', 'Q', 'M']:
            for a in types:
                for i in range(z):
                    p.add('layer{}.{}.{}.head{}'.format(l, kind, a, i),
                          glorot_uniform(rng, d, dh))
        for r in relations:
            p.add('layer{}.W_attn.{}'.format(l, r),
                  glorot_uniform(rng, dh, dh))
        for r in relations:
            p.add('layer{}.W_msg.{}'.format(l, r),
                  glorot_uniform(rng, dh, dh))
        p.add('layer{}.mu'.format(l), np.ones((1, len(relations))))
        for a in types:
            p.add('layer{}.A.{}'.format(l, a), glorot_uniform(rng, d, d))
        p.add('layer{}.lambda'.format(l), np.ones((1, len(types))))

    p.add('head.W1', glorot_uniform(rng, 4 * d, config.ffn_hidden))
    p.add('head.b1', np.zeros((1, config.ffn_hidden)))
    p.add('head.W2', glorot_uniform(rng, config.ffn_hidden,
                                    config.num_classes))
    p.add('head.b2', np.zeros((1, config.num_classes)))
    return p


def parameter_count(params, prefix=''):
    """ Number of scalar parameters, optionally under a name prefix. """
    return params.count(prefix)


# -- Compiled graph index ----------------------------------------------------

class CompiledGraph(object):
    """ Index arrays of one graph for one model vocabulary.

    Attributes:
        num_nodes (int): N.
        type_rows (list): ``(type index, type key, node ids)`` per present
            type, in vocabulary order.
        restore (ndarray): Gathering the per-type blocks by ``restore``
            gives rows in node-id order.
        edges (list): ``(src, dst, relation key)`` sorted by target, then
            source, then relation ordinal.
        src, dst, rel (ndarray): Per sorted edge.
        rel_groups (list): ``(relation index, edge positions)``.
        group_restore (ndarray): Reorders concatenated groups into sorted
            edge order.
    """

    def __init__(self, g, config):
        types, relations = config.node_types, config.relations
        rel_index = {r: i for i, r in enumerate(relations)}
        self.num_nodes = len(g.nodes)

        keys = [g.type_key(n.id) for n in g.nodes]
        unknown = sorted(set(keys) - set(types))
        if unknown:
            raise ValueError("Graph '{}' has node type(s) {} the model has no "
                             "parameters for.".format(g.graph_id, unknown))
        self.type_rows = []
        for ti, a in enumerate(types):
            rows = np.array([n.id for n, k in zip(g.nodes, keys) if k == a],
                            dtype=np.int64)
            if rows.size:
                self.type_rows.append((ti, a, rows))
        blocks = np.concatenate([rows for _, _, rows in self.type_rows])
        self.restore = np.argsort(blocks, kind='stable')

        for e in g.edges:
            if e.relation not in rel_index:
                raise ValueError("Graph '{}' has relation '{}' the model has "
                                 "no parameters for."
                                 "".format(g.graph_id, e.relation.key))
        ordered = sorted(g.edges,
                         key=lambda e: (e.dst, e.src, e.relation.ordinal))
        self.edges = [(e.src, e.dst, e.relation.key) for e in ordered]
        self.src = np.array([e.src for e in ordered], dtype=np.int64)
        self.dst = np.array([e.dst for e in ordered], dtype=np.int64)
        self.rel = np.array([rel_index[e.relation] for e in ordered],
                            dtype=np.int64)

        self.rel_groups = []
        for ri in range(len(relations)):
            pos = np.nonzero(self.rel == ri)[0]
            if pos.size:
                self.rel_groups.append((ri, pos))
        if self.rel_groups:
            order = np.concatenate([pos for _, pos in self.rel_groups])
            self.group_restore = np.argsort(order, kind='stable')
        else:
            self.group_restore = np.zeros(0, dtype=np.int64)

    @property
    def num_edges(self):
        return len(self.edges)


def compile_graph(g, config):
    """ Return the cached :class:`CompiledGraph` of ``g`` for ``config``. """
    key = (config.homogeneous, tuple(config.relation_keys),
           tuple(config.node_types))
    if key not in g._compiled:
        g._compiled[key] = CompiledGraph(g, config)
    return g._compiled[key]


def _head_sum(config):
    """ d x Z indicator summing each head's slice of a row. """
    d, dh = config.hidden_dim, config.head_dim
    out = np.zeros((d, config.num_heads))
    for i in range(config.num_heads):
        out[i * dh:(i + 1) * dh, i] = 1.0
    return out


def _per_type(H, comp, fn):
    """ Apply ``fn(type index, type key, node ids, rows of H)`` per node
    type and reassemble the results in node-id order.

    """
    parts = [fn(ti, a, rows, nt.gather_rows(H, rows))
             for ti, a, rows in comp.type_rows]
    return nt.gather_rows(nt.concat(parts, axis=0), comp.restore)


# -- Featurization -----------------------------------------------------------

def embedding_matrix(g, embeddings, input_dim):
    """ Stack node embeddings into an N x d_emb array.

    Args:
        g (DebateGraph): The graph.

        embeddings: Either an array with one row per node id, or a mapping
            from node id to vector.

        input_dim (int): Expected width.

    Raises:
        MissingEmbedding: If a node has no row.
        DimMismatch: If a row has the wrong width or the array has more
            rows than the graph has nodes.
    """
    n = len(g.nodes)
    if isinstance(embeddings, Mapping):
        rows = []
        for node in g.nodes:
            if node.id not in embeddings:
                raise MissingEmbedding(node.id)
            rows.append(np.asarray(embeddings[node.id], dtype=np.float64))
    else:
        arr = np.asarray(embeddings, dtype=np.float64)
        if arr.ndim != 2:
            raise DimMismatch("Embeddings must be a 2-D array, got shape {}."
                              "".format(arr.shape))
        if arr.shape[0] < n:
            raise MissingEmbedding(arr.shape[0])
        if arr.shape[0] > n:
            raise DimMismatch("Embeddings have {} rows for a graph of {} "
                              "nodes.".format(arr.shape[0], n))
        rows = list(arr)
    for node, row in zip(g.nodes, rows):
        if row.shape != (input_dim,):
            raise DimMismatch("Embedding of node {} has shape {}, expected "
                              "({},).".format(node.id, row.shape, input_dim))
    return np.vstack(rows) if rows else np.zeros((0, input_dim))


def node_embedding_matrix(g, store):
    """ Look up every node text in an embedding store keyed by content
    hash.

    Args:
        g (DebateGraph): The graph.

        store (Mapping): ``{content hash: vector}``, e.g. an
            :class:`~reviewgraph.agents.embeddings.EmbeddingCache`.

    Returns:
        ndarray: N x d_emb.
    """
    rows = []
    for node in g.nodes:
        key = content_hash(node.text)
        if key not in store:
            raise MissingEmbedding(node.id)
        rows.append(np.asarray(store[key], dtype=np.float64))
    return np.vstack(rows)


def featurize(g, embeddings, params):
    """ Function that computes ``H0[v] = embedding(v) @ W_in[type(v)]``.

    Returns:
        Tensor: N x d.
    """
    config = params.config
    X = Tensor(embedding_matrix(g, embeddings, config.input_dim))
    comp = compile_graph(g, config)
    return _per_type(X, comp, lambda ti, a, rows, Xa: nt.matmul(
        Xa, params['input.{}'.format(a)]))


# -- One layer ---------------------------------------------------------------

def _projection(H, comp, params, l, kind):
    z = params.config.num_heads
    return _per_type(H, comp, lambda ti, a, rows, Ha: nt.concat(
        [nt.matmul(Ha, params['layer{}.{}.{}.head{}'.format(l, kind, a, i)])
         for i in range(z)], axis=1))


def _relation_transform(X, params, name):
    """ Apply a d_h x d_h matrix to every head slice of the rows of X. """
    config = params.config
    n = X.shape[0]
    flat = nt.reshape(X, (n * config.num_heads, config.head_dim))
    return nt.reshape(nt.matmul(flat, params[name]), (n, config.hidden_dim))


def _scores(H, comp, params, l):
    config = params.config
    keys = config.relation_keys
    K = _projection(H, comp, params, l, 'K')
    Q = _projection(H, comp, params, l, 'Q')
    head_sum = _head_sum(config)
    parts = []
    for ri, pos in comp.rel_groups:
        kw = _relation_transform(nt.gather_rows(K, comp.src[pos]), params,
                                 'layer{}.W_attn.{}'.format(l, keys[ri]))
        q = nt.gather_rows(Q, comp.dst[pos])
        s = nt.matmul(nt.mul(kw, q), head_sum)
        mu = nt.take(params['layer{}.mu'.format(l)], np.full(pos.size, ri))
        parts.append(nt.mul_rows(s, mu))
    scores = nt.gather_rows(nt.concat(parts, axis=0), comp.group_restore)
    return nt.scale(scores, 1.0 / config.scale)


def _messages(H, comp, params, l):
    keys = params.config.relation_keys
    M = _projection(H, comp, params, l, 'M')
    parts = [_relation_transform(nt.gather_rows(M, comp.src[pos]), params,
                                 'layer{}.W_msg.{}'.format(l, keys[ri]))
             for ri, pos in comp.rel_groups]
    return nt.gather_rows(nt.concat(parts, axis=0), comp.group_restore)


def _attention(H, comp, params, l):
    return nt.segment_softmax(_scores(H, comp, params, l), comp.dst,
                              comp.num_nodes)


def _layer(H, comp, params, l):
    """ One layer; returns the new representations and the attention. """
    config = params.config
    if comp.num_edges:
        att = _attention(H, comp, params, l)
        msg = _messages(H, comp, params, l)
        weighted = nt.mul(nt.matmul(att, _head_sum(config).T), msg)
        agg = nt.scatter_add_rows(weighted, comp.dst, comp.num_nodes)
    else:
        att = Tensor(np.zeros((0, config.num_heads)))
        agg = Tensor(np.zeros((comp.num_nodes, config.hidden_dim)))

    lam = params['layer{}.lambda'.format(l)]

    def update(ti, a, rows, agg_a):
        h_a = nt.gather_rows(H, rows)
        scaled = nt.mul_scalar(agg_a, nt.take(lam, [ti]))
        return nt.add(nt.matmul(scaled, params['layer{}.A.{}'.format(l, a)]),
                      h_a)

    return _per_type(agg, comp, update), att


def hgt_attention(H_prev, g, params, l):
    """ Per-edge, per-head attention weights of layer ``l``.

    Returns:
        Tensor: E x Z, rows in the order of ``compile_graph(g, config).edges``.
    """
    comp = compile_graph(g, params.config)
    if not comp.num_edges:
        return Tensor(np.zeros((0, params.config.num_heads)))
    return _attention(nt.as_tensor(H_prev), comp, params, l)


def hgt_message(H_prev, g, params, l):
    """ Per-edge messages of layer ``l`` (heads concatenated).

    Returns:
        Tensor: E x d, rows in compiled edge order.
    """
    comp = compile_graph(g, params.config)
    if not comp.num_edges:
        return Tensor(np.zeros((0, params.config.hidden_dim)))
    return _messages(nt.as_tensor(H_prev), comp, params, l)


def hgt_layer(H_prev, g, params, l):
    """ Node representations after layer ``l``. """
    comp = compile_graph(g, params.config)
    return _layer(nt.as_tensor(H_prev), comp, params, l)[0]


# -- Forward pass ------------------------------------------------------------

class ForwardTrace(object):
    """ Intermediate values of one prediction.

    Attributes:
        hidden (list): H0 ... HL as arrays.
        attention (list): Per layer, an E x Z array.
        edges (list): ``(src, dst, relation key)`` matching attention rows.
        pooled (dict): Pooled vector per node type key.
        h_concat (ndarray): The 1 x 4d classifier input.
        probs (ndarray): Output probabilities (accept, reject).
    """

    def __init__(self):
        self.hidden = []
        self.attention = []
        self.edges = []
        self.pooled = {}
        self.h_concat = None
        self.probs = None


def _pool(H, g, comp, config):
    d = config.hidden_dim
    if config.homogeneous:
        slots = [nt.mean_rows(H)] + [Tensor(np.zeros((1, d)))] * 3
        keys = [config.node_types[0], None, None, None]
    else:
        slots, keys = [], []
        for t in NODE_TYPE_ORDER:
            rows = g.nodes_of_type(t)
            if rows:
                slots.append(nt.mean_rows(nt.gather_rows(H, rows)))
            else:
                slots.append(Tensor(np.zeros((1, d))))
            keys.append(t.value)
    return slots, keys


def _run(g, embeddings, params, trace=None):
    config = params.config
    comp = compile_graph(g, config)
    H = featurize(g, embeddings, params)
    if trace is not None:
        trace.edges = list(comp.edges)
        trace.hidden.append(H.data.copy())
    for l in range(config.num_layers):
        H, att = _layer(H, comp, params, l)
        if trace is not None:
            trace.hidden.append(H.data.copy())
            trace.attention.append(att.data.copy())

    slots, keys = _pool(H, g, comp, config)
    h = nt.concat(slots, axis=1)
    z = nt.relu(nt.add(nt.matmul(h, params['head.W1']), params['head.b1']))
    logits = nt.add(nt.matmul(z, params['head.W2']), params['head.b2'])
    probs = nt.softmax(logits)
    if trace is not None:
        trace.pooled = {k: s.data.copy() for k, s in zip(keys, slots)
                        if k is not None}
        trace.h_concat = h.data.copy()
        trace.probs = probs.data.reshape(-1).copy()
    return probs


def forward(g, embeddings, params):
    """ Probabilities as a 1 x 2 tensor, recording the tape when gradients
    are enabled (training path).

    """
    return _run(g, embeddings, params)


def predict(g, embeddings, params, config=None):
    """ Function that runs the full model on one graph without recording a
    tape.

    Args:
        g (DebateGraph): A valid graph.

        embeddings: Node embeddings, see :func:`embedding_matrix`.

        params (HgtParams): Model parameters.

        config (ModelConfig): Must match ``params.config`` when given.

    Returns:
        tuple: ``(probs, trace)`` with probs an array (accept, reject) and a
        :class:`ForwardTrace`.
    """
    if config is not None and config != params.config:
        raise DimMismatch("Config does not match the parameters: {} vs {}"
                          "".format(config, params.config))
    trace = ForwardTrace()
    with no_grad():
        _run(g, embeddings, params, trace)
    return trace.probs, trace


def graph_loss(g, embeddings, params, label):
    """ Cross-entropy loss of one labeled graph (1 x 1 tensor). """
    return nt.cross_entropy(forward(g, embeddings, params),
                            label_index(label))
