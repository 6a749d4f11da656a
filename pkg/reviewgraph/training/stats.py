""" Provide ``welch_t_test``, the two-sample t-test without the equal
variance assumption.

"""

# -- Imports -----------------------------------------------------------------
import numpy as np
from scipy import stats

from reviewgraph.exceptions import DegenerateSample

ALPHA = 0.05


class WelchResult(object):

    def __init__(self, t, df, p, alpha=ALPHA):
        self.t = t
        self.df = df
        self.p = p
        self.alpha = alpha

    @property
    def significant(self):
        return self.p < self.alpha

    def to_dict(self):
        return {'t': self.t, 'df': self.df, 'p': self.p,
                'significant': self.significant}

    def __iter__(self):
        return iter((self.t, self.df, self.p))

    def __str__(self):
        return "Welch t = {:.4f}, df = {:.2f}, p = {:.4f} ({})".format(
            self.t, self.df, self.p,
            'significant' if self.significant else 'not significant')


def welch_t_test(sample_a, sample_b, alpha=ALPHA):
    """ Function that compares the means of two samples, e.g. per-seed
    scores of two runs.

    The degrees of freedom follow the Welch-Satterthwaite equation; the
    two-sided p-value comes from the t distribution.

    Args:
        sample_a (list): At least two values.

        sample_b (list): At least two values.

    Keyword Args:
        alpha (float): Significance level reported on the result. Default is
            0.05.

    Returns:
        WelchResult: Unpacks as ``(t, df, p)``.

    Raises:
        DegenerateSample: If a sample has fewer than two values, or both
            have zero variance.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise DegenerateSample("Each sample needs at least two values, got "
                               "{} and {}.".format(a.size, b.size))
    va = a.var(ddof=1) / a.size
    vb = b.var(ddof=1) / b.size
    if va + vb == 0:
        raise DegenerateSample("Both samples have zero variance.")

    df = (va + vb) ** 2 / (va ** 2 / (a.size - 1) + vb ** 2 / (b.size - 1))
    t, p = stats.ttest_ind(a, b, equal_var=False)
    return WelchResult(float(t), float(df), float(p), alpha)
