import numpy as np
import pytest

from .context import make_split
from reviewgraph.exceptions import (BadLabel, EmptySplit, NonFiniteGradient,
                                    NonFiniteLoss)
from reviewgraph.model import ModelConfig
from reviewgraph.numerics.params import ParamStore
from reviewgraph.training import (AdamState, EarlyStopping, TrainConfig,
                                  adam_step, evaluate_split, read_history,
                                  train, write_history)
from reviewgraph.viz import HistoryPlot


def small_config(input_dim=8):
    return ModelConfig(hidden_dim=8, num_heads=2, input_dim=input_dim,
                       ffn_hidden=8, num_layers=2, seed=0)


# -- Adam --------------------------------------------------------------------

def test_adam_first_step():
    params = ParamStore()
    params.add('w', [[1.0, -1.0]])
    state = AdamState()
    adam_step(params, {'w': np.array([[0.5, -0.25]])}, state, 1,
              TrainConfig(learning_rate=0.1))

    # The bias-corrected first step moves every entry by the learning rate
    np.testing.assert_almost_equal(params['w'].data, [[0.9, -0.9]], 6)
    assert state.t == 1


def test_adam_missing_gradient_is_zero():
    params = ParamStore()
    params.add('w', [[1.0]])
    params.add('b', [[2.0]])
    adam_step(params, {'w': np.array([[1.0]]), 'b': None}, AdamState(), 1,
              TrainConfig(learning_rate=0.1))

    np.testing.assert_almost_equal(params['b'].data, [[2.0]])


def test_adam_non_finite_gradient():
    params = ParamStore()
    params.add('w', [[1.0, 2.0]])
    with pytest.raises(NonFiniteGradient):
        adam_step(params, {'w': np.array([[np.nan, 0.0]])}, AdamState(), 1,
                  TrainConfig())
    np.testing.assert_array_equal(params['w'].data, [[1.0, 2.0]])


# -- Early stopping ----------------------------------------------------------

def test_early_stopping():
    stopper = EarlyStopping(patience=2)
    flags = [stopper.update(e, s) for e, s in
             enumerate([0.5, 0.6, 0.6, 0.55], start=1)]

    assert flags == [True, True, False, False]
    assert stopper.best_epoch == 2
    assert stopper.stop


def test_early_stopping_zero_patience():
    stopper = EarlyStopping(patience=0)
    stopper.update(1, 0.4)
    assert not stopper.stop
    stopper.update(2, 0.4)
    assert stopper.stop


def test_train_config_checks():
    with pytest.raises(ValueError):
        TrainConfig(learning_rate=0)
    with pytest.raises(ValueError):
        TrainConfig(max_epochs=5, early_stop_patience=6)
    with pytest.raises(AttributeError):
        TrainConfig(momentum=0.9)


# -- Training loop -----------------------------------------------------------

def case_overfit():
    data = make_split(32, seed=4, embedding_dim=8, noise=1.0)
    model_config = ModelConfig(hidden_dim=16, num_heads=2, input_dim=8,
                               ffn_hidden=32, num_layers=2, seed=0)
    config = TrainConfig(learning_rate=1e-3, batch_size=1, max_epochs=100,
                         early_stop_patience=10, seed=0)
    checkpoint, history = train(data, data, model_config, config)
    return data, checkpoint, history


def test_case_overfit():
    data, checkpoint, history = case_overfit()

    assert len(history) <= 100
    assert history['train_loss'].iloc[-1] < history['train_loss'].iloc[0]
    assert checkpoint.best_val_f1 == history['val_macro_f1'].max()
    assert checkpoint.epoch == int(
        history.loc[history['best'], 'epoch'].iloc[-1])
    assert history['val_accuracy'].max() == 1.0
    assert evaluate_split(data, checkpoint.params).accuracy == 1.0


def test_training_is_reproducible():
    data = make_split(6, seed=1, embedding_dim=8)
    config = TrainConfig(learning_rate=1e-3, batch_size=2, max_epochs=3,
                         early_stop_patience=3)
    a, history_a = train(data, data, small_config(), config)
    b, history_b = train(data, data, small_config(), config)

    np.testing.assert_array_equal(history_a['train_loss'].values,
                                  history_b['train_loss'].values)
    for name in a.params:
        np.testing.assert_array_equal(a.params[name].data,
                                      b.params[name].data)


def test_early_stop_in_loop():
    data = make_split(4, seed=2, embedding_dim=8)
    config = TrainConfig(learning_rate=1e-6, batch_size=4, max_epochs=20,
                         early_stop_patience=2)
    checkpoint, history = train(data, data, small_config(), config)

    assert len(history) < 20
    assert checkpoint.epoch == 1 or history['best'].sum() > 1


def test_empty_and_unlabeled_splits():
    data = make_split(2, seed=0, embedding_dim=8)
    config = TrainConfig(max_epochs=1, early_stop_patience=1)
    with pytest.raises(EmptySplit):
        train(data, [], small_config(), config)

    g, x = data[0]
    g.label = None
    with pytest.raises(BadLabel):
        train(data, data, small_config(), config)


def test_non_finite_loss():
    data = make_split(2, seed=0, embedding_dim=8)
    data = [(g, np.full_like(x, np.nan)) for g, x in data]
    config = TrainConfig(max_epochs=1, early_stop_patience=1)
    with pytest.raises(NonFiniteLoss):
        train(data, data, small_config(), config)


# -- History -----------------------------------------------------------------

def test_history_files(tmp_path):
    data = make_split(4, seed=3, embedding_dim=8)
    config = TrainConfig(max_epochs=2, early_stop_patience=2, batch_size=2)
    _, history = train(data, data, small_config(), config)

    path = str(tmp_path / 'history.jsonl')
    write_history(history, path)
    again = read_history(path)
    assert list(again.columns) == list(history.columns)
    np.testing.assert_allclose(again['train_loss'].values,
                               history['train_loss'].values)

    png = str(tmp_path / 'history.png')
    HistoryPlot(history, filename=png).draw()
    assert (tmp_path / 'history.png').exists()


def test_history_plot_checks():
    import pandas as pd
    with pytest.raises(ValueError):
        HistoryPlot(pd.DataFrame({'epoch': [1]}))
    with pytest.raises(AttributeError):
        HistoryPlot(pd.DataFrame(), colour='red')
