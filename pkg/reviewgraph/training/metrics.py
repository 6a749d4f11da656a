""" Provide ``evaluate`` and the ``EvalReport`` class: accuracy and the
macro-averaged precision, recall and F1 over the two decision classes.

Precision or recall of a class with a zero denominator is 0, and so is its
F1 when precision and recall are both 0.

"""

# -- Imports -----------------------------------------------------------------
import numpy as np
from sklearn.metrics import (
    accuracy_score, confusion_matrix, precision_recall_fscore_support)
from tabulate import tabulate

from reviewgraph.exceptions import LengthMismatch
from reviewgraph.model.hgt import CLASSES, label_index


def _as_index(y):
    if isinstance(y, str):
        return label_index(y)
    return int(y)


# -- EvalReport Class --------------------------------------------------------

class EvalReport(object):
    """ Class to represent the metrics of one prediction set.

    Attributes:
        accuracy, macro_precision, macro_recall, macro_f1 (float): In [0, 1].
        per_class (dict): ``{class: {tp, fp, fn, precision, recall, f1}}``.
        confusion (ndarray): 2 x 2 counts, rows gold, columns predicted.
        n (int): Number of samples.
        ttest (WelchResult): Optional significance test against another
            run.
    """

    def __init__(self, accuracy, macro_precision, macro_recall, macro_f1,
                 per_class, confusion, n, ttest=None):
        self.accuracy = accuracy
        self.macro_precision = macro_precision
        self.macro_recall = macro_recall
        self.macro_f1 = macro_f1
        self.per_class = per_class
        self.confusion = confusion
        self.n = n
        self.ttest = ttest

    def as_row(self):
        """ Accuracy, macro precision, recall and F1 in percent, two
        decimals.

        """
        return [round(100.0 * v, 2) for v in
                (self.accuracy, self.macro_precision, self.macro_recall,
                 self.macro_f1)]

    def to_dict(self):
        d = {'accuracy': self.accuracy,
             'macro_precision': self.macro_precision,
             'macro_recall': self.macro_recall,
             'macro_f1': self.macro_f1,
             'n': self.n,
             'per_class': self.per_class}
        if self.ttest is not None:
            d['ttest'] = self.ttest.to_dict()
        return d

    def table(self, tablefmt='simple'):
        rows = [[c, v['tp'], v['fp'], v['fn'], round(v['precision'], 4),
                 round(v['recall'], 4), round(v['f1'], 4)]
                for c, v in self.per_class.items()]
        rows.append(['macro', '', '', '', round(self.macro_precision, 4),
                     round(self.macro_recall, 4), round(self.macro_f1, 4)])
        out = tabulate(rows, headers=['class', 'TP', 'FP', 'FN', 'P', 'R',
                                      'F1'], tablefmt=tablefmt)
        out += '\naccuracy: {:.4f} (n = {})'.format(self.accuracy, self.n)
        if self.ttest is not None:
            out += '\n' + str(self.ttest)
        return out

    def __str__(self):
        return self.table()


# -- Evaluation --------------------------------------------------------------

def evaluate(preds, golds):
    """ Function that scores predictions against gold decisions.

    Args:
        preds (list): Predicted classes, as indices or 'accept' / 'reject'.

        golds (list): Gold classes, same encoding.

    Returns:
        EvalReport

    Raises:
        LengthMismatch: If the lists differ in length or are empty.
    """
    if len(preds) != len(golds):
        raise LengthMismatch("{} predictions for {} gold labels."
                             "".format(len(preds), len(golds)))
    if not len(preds):
        raise LengthMismatch("Cannot evaluate an empty prediction set.")
    y_pred = np.array([_as_index(y) for y in preds])
    y_true = np.array([_as_index(y) for y in golds])
    labels = list(range(len(CLASSES)))

    cm = confusion_matrix(y_true, y_pred, labels=labels)
    precision, recall, f1, _ = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, average=None, zero_division=0)

    per_class = {}
    for i, c in enumerate(CLASSES):
        per_class[c] = {'tp': int(cm[i, i]),
                        'fp': int(cm[:, i].sum() - cm[i, i]),
                        'fn': int(cm[i, :].sum() - cm[i, i]),
                        'precision': float(precision[i]),
                        'recall': float(recall[i]),
                        'f1': float(f1[i])}

    return EvalReport(accuracy=float(accuracy_score(y_true, y_pred)),
                      macro_precision=float(np.mean(precision)),
                      macro_recall=float(np.mean(recall)),
                      macro_f1=float(np.mean(f1)),
                      per_class=per_class, confusion=cm, n=len(y_true))
