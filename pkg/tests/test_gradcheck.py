import numpy as np

from .context import apply_ablation, random_debate_graph
from reviewgraph.cli import GRADCHECK_TOLERANCE, gradcheck_config
from reviewgraph.model.hgt import graph_loss, init_params
from reviewgraph.numerics import tensor as nt
from reviewgraph.numerics.gradcheck import grad_check, grad_check_report
from reviewgraph.numerics.params import ParamStore


def case_a(seed=0):
    config = gradcheck_config(seed)
    g, x = random_debate_graph(seed, config.input_dim)
    params = init_params(config)
    return grad_check_report(lambda p: graph_loss(g, x, p, g.label), params)


def test_case_a():
    report = case_a()

    assert report.passed(GRADCHECK_TOLERANCE), str(report)
    assert report.entries > 0
    # Every parameter is reached: all four node types and both opinion
    # relation groups are present
    assert 'input.title' in report.per_param
    assert 'layer1.W_attn.inverse_has_aspect' in report.per_param


def test_other_seed():
    assert case_a(seed=7).passed(GRADCHECK_TOLERANCE)


def test_homogeneous_model():
    config = gradcheck_config(1).replace(homogeneous=True)
    g, x = random_debate_graph(1, config.input_dim)
    g = apply_ablation(g, 'homogeneous')
    params = init_params(config)
    error = grad_check(lambda p: graph_loss(g, x, p, g.label), params)

    assert error < GRADCHECK_TOLERANCE


def test_unused_parameters_are_skipped():
    config = gradcheck_config(0)
    g, x = random_debate_graph(0, config.input_dim)
    params = init_params(config)
    report = grad_check_report(lambda p: graph_loss(g, x, p, g.label),
                               params)

    # The relations absent from the graph never receive a gradient
    assert report.skipped
    assert all(name.startswith('layer') for name in report.skipped)


def test_values_are_restored():
    params = ParamStore()
    w = params.add('w', [[0.3, -0.2]])
    before = w.data.copy()
    report = grad_check_report(
        lambda p: nt.sum_cols(nt.mul(p['w'], p['w'])), params)

    np.testing.assert_array_equal(w.data, before)
    assert w.grad is None
    assert report.max_rel_error < 1e-8
