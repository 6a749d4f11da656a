import numpy as np
import pytest

from .context import (DebateGraph, Edge, Node, NodeType, apply_ablation,
                      forward_only, random_debate_graph, varied_graphs)
from reviewgraph.exceptions import DimMismatch, MissingEmbedding
from reviewgraph.model import ModelConfig
from reviewgraph.model.hgt import (compile_graph, featurize, hgt_attention,
                                   hgt_layer, hgt_message, init_params,
                                   parameter_count, predict)
from reviewgraph.numerics import no_grad


def small_config(**kwargs):
    d = dict(hidden_dim=8, num_heads=2, input_dim=4, ffn_hidden=6,
             num_layers=2, seed=1)
    d.update(kwargs)
    return ModelConfig(**d)


def case_a():
    g, x = random_debate_graph(seed=3, embedding_dim=4)
    params = init_params(small_config())
    return g, x, params


def attention_sums(att, edges, n):
    sums = np.zeros((n, att.shape[1]))
    np.add.at(sums, [dst for _, dst, _ in edges], att)
    return sums


def test_attention_sums_to_one():
    params = init_params(small_config())
    passthrough = 0
    for i, (g, x) in enumerate(varied_graphs(1000, seed=8)):
        if i % 2:
            g = forward_only(g)
        edges = compile_graph(g, params.config).edges
        has_incoming = np.zeros(g.num_nodes, dtype=bool)
        has_incoming[[dst for _, dst, _ in edges]] = True

        with no_grad():
            H = featurize(g, x, params)
            for l in range(2):
                att = hgt_attention(H, g, params, l).data
                assert att.shape == (len(edges), 2)
                np.testing.assert_allclose(
                    attention_sums(att, edges, g.num_nodes)[has_incoming],
                    1.0, rtol=0, atol=1e-12)
                H_next = hgt_layer(H, g, params, l)
                np.testing.assert_array_equal(H_next.data[~has_incoming],
                                              H.data[~has_incoming])
                H = H_next
        passthrough += int(np.sum(~has_incoming))

    assert passthrough >= 500


def test_message_shape():
    g, x, params = case_a()
    msg = hgt_message(featurize(g, x, params), g, params, 1)
    assert msg.shape == (len(g.edges), 8)


def test_residual_with_zero_rescale():
    g, x, params = case_a()
    params['layer0.lambda'].data[:] = 0.0
    H0 = featurize(g, x, params)
    H1 = hgt_layer(H0, g, params, 0)

    np.testing.assert_almost_equal(H1.data, H0.data)


def test_probabilities():
    g, x, params = case_a()
    probs, trace = predict(g, x, params)

    assert probs.shape == (2,)
    np.testing.assert_almost_equal(probs.sum(), 1.0)
    assert len(trace.hidden) == 3
    assert len(trace.attention) == 2
    assert trace.h_concat.shape == (1, 32)
    np.testing.assert_array_equal(predict(g, x, params)[0], probs)


def permuted(g, x, perm):
    """ The same graph with node ``i`` renamed ``perm[i]``. """
    nodes = sorted((Node(perm[n.id], n.node_type, n.text, n.speaker,
                         n.dimension) for n in g.nodes),
                   key=lambda n: n.id)
    edges = [Edge(perm[e.src], perm[e.dst], e.relation)
             for e in reversed(g.edges)]
    y = np.zeros_like(x)
    y[perm] = x
    return DebateGraph(g.graph_id, nodes, edges, label=g.label), y


def test_node_order_does_not_matter():
    params = init_params(small_config())
    rng = np.random.default_rng(0)
    for g, x in varied_graphs(100, seed=5):
        perm = rng.permutation(g.num_nodes)
        h, y = permuted(g, x, perm)

        np.testing.assert_allclose(predict(h, y, params)[0],
                                   predict(g, x, params)[0], rtol=0,
                                   atol=1e-9)


def test_empty_type_pools_to_zero():
    g, x, params = case_a()
    h = apply_ablation(g, 'no_title')
    keep = sorted(h.id_map)
    _, trace = predict(h, x[keep], params)

    np.testing.assert_array_equal(trace.pooled['title'], np.zeros((1, 8)))
    assert np.any(trace.pooled['author_opinion'])


def test_parameter_counts():
    d, dh, z, e, f = 8, 4, 2, 4, 6
    head = 4 * d * f + f + f * 2 + 2

    params = init_params(small_config())
    per_layer = 3 * 4 * z * d * dh + 2 * 26 * dh * dh + 26 + 4 * d * d + 4
    assert parameter_count(params) == 4 * e * d + 2 * per_layer + head
    assert parameter_count(params, 'head.') == head

    params = init_params(small_config(use_inverse_edges=False))
    assert parameter_count(params, 'layer0.mu') == 13

    params = init_params(small_config(homogeneous=True))
    per_layer = 3 * z * d * dh + 2 * dh * dh + 1 + d * d + 1
    assert parameter_count(params) == e * d + 2 * per_layer + head


def test_homogeneous_model():
    g, x, _ = case_a()
    h = apply_ablation(g, 'homogeneous')
    params = init_params(small_config(homogeneous=True))
    probs, trace = predict(h, x, params)

    np.testing.assert_almost_equal(probs.sum(), 1.0)
    assert list(trace.pooled) == ['node']
    np.testing.assert_array_equal(trace.h_concat[0, 8:], np.zeros(24))


def test_model_type_mismatch():
    g, x, params = case_a()
    with pytest.raises(ValueError):
        predict(apply_ablation(g, 'homogeneous'), x, params)


def test_same_seed_same_parameters():
    a = init_params(small_config())
    b = init_params(small_config())
    c = init_params(small_config(seed=2))
    for name in a:
        np.testing.assert_array_equal(a[name].data, b[name].data)
    assert not np.array_equal(a['head.W1'].data, c['head.W1'].data)


def test_embedding_errors():
    g, x, params = case_a()
    with pytest.raises(MissingEmbedding):
        predict(g, x[:-1], params)
    with pytest.raises(DimMismatch):
        predict(g, np.vstack([x, x[:1]]), params)
    with pytest.raises(DimMismatch):
        predict(g, x[:, :3], params)
    with pytest.raises(DimMismatch):
        predict(g, x, params, config=small_config(seed=9))


def test_config_checks():
    with pytest.raises(ValueError):
        small_config(num_heads=3)
    with pytest.raises(ValueError):
        ModelConfig(hidden_dim=8)
    with pytest.raises(AttributeError):
        small_config(dropout=0.1)
    assert small_config().head_dim == 4
    assert NodeType.TITLE.value in small_config().node_types


# -- Dense reference ---------------------------------------------------------

def dense_probs(g, x, params):
    """ Edge-by-edge, head-by-head reference of the forward pass. """
    c = params.config
    d, dh = c.hidden_dim, c.head_dim
    rels = c.relation_keys
    key = [g.type_key(n.id) for n in g.nodes]

    def w(name):
        return params[name].data

    H = np.vstack([x[v] @ w('input.' + key[v]) for v in range(g.num_nodes)])
    for l in range(c.num_layers):
        out = np.zeros_like(H)
        for t in range(g.num_nodes):
            agg = np.zeros(d)
            incoming = [e for e in g.edges if e.dst == t]
            for i in range(c.num_heads):
                if not incoming:
                    break
                scores, msgs = [], []
                for e in incoming:
                    s, r = e.src, e.relation.key
                    k = H[s] @ w('layer{}.K.{}.head{}'.format(l, key[s], i))
                    q = H[t] @ w('layer{}.Q.{}.head{}'.format(l, key[t], i))
                    mu = w('layer{}.mu'.format(l))[0, rels.index(r)]
                    scores.append((k @ w('layer{}.W_attn.{}'.format(l, r)))
                                  @ q * mu / c.scale)
                    m = H[s] @ w('layer{}.M.{}.head{}'.format(l, key[s], i))
                    msgs.append(m @ w('layer{}.W_msg.{}'.format(l, r)))
                a = np.exp(np.array(scores) - max(scores))
                a = a / a.sum()
                agg[i * dh:(i + 1) * dh] = sum(aj * mj
                                               for aj, mj in zip(a, msgs))
            lam = w('layer{}.lambda'.format(l))[0, c.node_types.index(key[t])]
            out[t] = (lam * agg) @ w('layer{}.A.{}'.format(l, key[t])) + H[t]
        H = out

    if c.homogeneous:
        pools = [H.mean(axis=0)] + [np.zeros(d)] * 3
    else:
        pools = []
        for a in NodeType:
            rows = [n.id for n in g.nodes if n.node_type is a]
            pools.append(H[rows].mean(axis=0) if rows else np.zeros(d))
    h = np.concatenate(pools)
    z = np.maximum(h @ w('head.W1') + w('head.b1')[0], 0.0)
    logits = z @ w('head.W2') + w('head.b2')[0]
    e = np.exp(logits - logits.max())
    return e / e.sum()


def test_matches_dense_reference():
    graphs = [random_debate_graph(seed=0, embedding_dim=4)]
    graphs += varied_graphs(49, seed=2, max_opinions=3)
    for seed, (g, x) in enumerate(graphs):
        assert g.num_nodes <= 12
        params = init_params(small_config(seed=seed))
        # Move the priors and rescale factors off their initial ones
        rng = np.random.default_rng(seed)
        for name in ['layer0.mu', 'layer1.mu', 'layer0.lambda',
                     'layer1.lambda']:
            params[name].data[:] = rng.uniform(0.5, 1.5,
                                               params[name].data.shape)

        np.testing.assert_allclose(predict(g, x, params)[0],
                                   dense_probs(g, x, params), atol=1e-10)


def test_homogeneous_matches_dense_reference():
    g, x = random_debate_graph(seed=4, embedding_dim=4)
    h = apply_ablation(g, 'homogeneous')
    params = init_params(small_config(homogeneous=True, seed=4))

    np.testing.assert_allclose(predict(h, x, params)[0],
                               dense_probs(h, x, params), atol=1e-10)
