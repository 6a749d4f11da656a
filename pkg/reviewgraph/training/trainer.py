""" Provide ``train``, the training loop with early stopping on validation
macro-F1, and helpers to predict and evaluate a split.

A split is a list of ``(DebateGraph, embeddings)`` pairs, where the
embeddings hold one row per node id. Labels come from ``DebateGraph.label``.

"""

# -- Imports -----------------------------------------------------------------
import logging

import numpy as np
import pandas as pd

from reviewgraph.exceptions import BadLabel, EmptySplit, NonFiniteLoss
from reviewgraph.model.hgt import (
    forward, init_params, label_index, predict)
from reviewgraph.numerics import tensor as nt
from reviewgraph.training.checkpoint import Checkpoint
from reviewgraph.training.metrics import evaluate
from reviewgraph.training.optim import AdamState, adam_step

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ['epoch', 'train_loss', 'train_accuracy', 'val_accuracy',
                   'val_macro_precision', 'val_macro_recall', 'val_macro_f1',
                   'best']


# -- EarlyStopping Class -----------------------------------------------------

class EarlyStopping(object):
    """ Track the best validation score. An epoch improves only when it
    beats the best score strictly, so the earliest best epoch is kept. Each
    non-improving epoch increments a counter, and training stops once the
    counter reaches ``patience`` (with patience 0, at the first
    non-improving epoch).

    """

    def __init__(self, patience=10):
        self.patience = patience
        self.counter = 0
        self.best_score = None
        self.best_epoch = None
        self.best_state = None
        self.stop = False

    def update(self, epoch, score, state=None):
        """ Record an epoch.

        Returns:
            bool: True if the epoch is the new best.
        """
        if self.best_score is None or score > self.best_score:
            self.best_score = score
            self.best_epoch = epoch
            self.best_state = state
            self.counter = 0
            return True
        self.counter += 1
        if self.counter >= self.patience:
            self.stop = True
        return False


# -- Prediction helpers ------------------------------------------------------

def _check_split(split, name):
    if not split:
        raise EmptySplit("The {} split is empty.".format(name))
    for g, _ in split:
        if g.label is None:
            raise BadLabel("Graph '{}' in the {} split has no label."
                           "".format(g.graph_id, name))


def predict_labels(split, params):
    """ Predicted class indices for a split, in split order. """
    return [int(np.argmax(predict(g, x, params)[0])) for g, x in split]


def evaluate_split(split, params):
    """ :class:`EvalReport` of the model on a labeled split. """
    preds = predict_labels(split, params)
    return evaluate(preds, [label_index(g.label) for g, _ in split])


# -- Training loop -----------------------------------------------------------

def train(train_set, val_set, model_config, train_config, params=None):
    """ Function that trains a model with Adam and early stopping.

    Per epoch the training split is shuffled with the seeded generator and
    cut into batches. The loss of a batch is the mean cross-entropy of its
    graphs; gradients are accumulated graph by graph and Adam steps once per
    batch. Validation macro-F1 is computed after every epoch.

    Args:
        train_set (list): ``(graph, embeddings)`` pairs, labeled.

        val_set (list): ``(graph, embeddings)`` pairs, labeled.

        model_config (ModelConfig): Model shape.

        train_config (TrainConfig): Optimization settings.

    Keyword Args:
        params (HgtParams): Start from these parameters instead of a fresh
            initialization.

    Returns:
        tuple: ``(Checkpoint, DataFrame)``, the best checkpoint and one
        history row per epoch.

    Raises:
        EmptySplit: If a split is empty.
        NonFiniteLoss: If a loss turns NaN or infinite.
    """
    _check_split(train_set, 'training')
    _check_split(val_set, 'validation')

    rng = np.random.default_rng(train_config.seed)
    if params is None:
        params = init_params(model_config)
    state = AdamState()
    stopper = EarlyStopping(train_config.early_stop_patience)
    rows, step = [], 0
    n, bs = len(train_set), train_config.batch_size

    for epoch in range(1, train_config.max_epochs + 1):
        order = rng.permutation(n) if train_config.shuffle else np.arange(n)
        total_loss, correct = 0.0, 0

        for b, start in enumerate(range(0, n, bs)):
            batch = order[start:start + bs]
            params.zero_grad()
            for i in batch:
                g, x = train_set[i]
                probs = forward(g, x, params)
                target = label_index(g.label)
                loss = nt.cross_entropy(probs, target)
                value = loss.item()
                if not np.isfinite(value):
                    raise NonFiniteLoss("Loss is {} at epoch {}, batch {}, "
                                        "graph '{}'.".format(value, epoch, b,
                                                             g.graph_id))
                nt.scale(loss, 1.0 / len(batch)).backward()
                total_loss += value
                correct += int(np.argmax(probs.data) == target)
            step += 1
            adam_step(params, {name: t.grad for name, t in params.items()},
                      state, step, train_config)

        report = evaluate_split(val_set, params)
        improved = stopper.update(epoch, report.macro_f1, params.arrays())
        rows.append([epoch, total_loss / n, correct / n, report.accuracy,
                     report.macro_precision, report.macro_recall,
                     report.macro_f1, improved])
        logger.info("Epoch %d: train loss %.4f, train acc %.4f, val macro-F1 "
                    "%.4f%s", epoch, total_loss / n, correct / n,
                    report.macro_f1, ' (best)' if improved else '')
        if stopper.stop:
            logger.info("Early stopping at epoch %d; best epoch %d (val "
                        "macro-F1 %.4f)", epoch, stopper.best_epoch,
                        stopper.best_score)
            break

    params.load_arrays(stopper.best_state)
    params.zero_grad()
    checkpoint = Checkpoint(model_config, train_config, params,
                            epoch=stopper.best_epoch,
                            best_val_f1=stopper.best_score)
    history = pd.DataFrame(rows, columns=HISTORY_COLUMNS)
    return checkpoint, history


# -- History files -----------------------------------------------------------

def write_history(history, path):
    """ Write the history as JSON lines, one epoch per line. """
    history.to_json(path, orient='records', lines=True, double_precision=15)


def read_history(path):
    return pd.read_json(path, orient='records', lines=True)
