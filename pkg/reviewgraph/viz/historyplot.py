""" Provide the ``HistoryPlot`` class.

"""

# -- Imports -----------------------------------------------------------------
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import AutoMinorLocator, MaxNLocator  # noqa: E402


# -- HistoryPlot Class -------------------------------------------------------

class HistoryPlot(object):
    """ Class to represent a training-history plot drawn with `Matplotlib
    <https://matplotlib.org/>`_: training loss on the left axis, validation
    macro-F1 and training accuracy on the right axis, and a marker at the
    best epoch.

    """

    # -- Constructor ---------------------------------------------------------

    def __init__(self, history, **kwargs):
        """
        Args:
            history (DataFrame): One row per epoch, as returned by
                :func:`~reviewgraph.training.trainer.train`.

        Keyword Args:
            title (str): Title of the plot. Default is 'Training history'.

            filename (str): PNG file to write. Default is ``None``, which
                returns the figure without saving it.

        """
        allowed_keys = ['title', 'filename']
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute.\nThe "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        required = ['epoch', 'train_loss', 'train_accuracy', 'val_macro_f1']
        missing = [c for c in required if c not in history.columns]
        if missing:
            raise ValueError("History lacks column(s) {}.".format(missing))
        if history.empty:
            raise ValueError("Can't plot an empty history.")

        self.history = history
        self.title = kwargs.get('title', 'Training history')
        self.filename = kwargs.get('filename', None)

    # -- Method that produces the plot ---------------------------------------

    def draw(self):
        """ Method that draws the plot.

        Returns:
            The Matplotlib figure; it is saved and closed when a filename is
            set.
        """
        h = self.history
        fig = plt.figure(figsize=(7, 4.5), dpi=150)
        ax = fig.add_subplot(111)
        ax.plot(h['epoch'], h['train_loss'], lw=2, color='tab:blue',
                label='train loss')
        ax.set_xlabel('Epoch', weight='semibold', size=9)
        ax.set_ylabel('Cross-entropy', weight='semibold', size=9)
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.grid(color='grey', linestyle='--', linewidth=0.75, alpha=0.5,
                zorder=-1)

        ax2 = ax.twinx()
        ax2.plot(h['epoch'], h['val_macro_f1'], lw=2, color='tab:orange',
                 label='val macro-F1')
        ax2.plot(h['epoch'], h['train_accuracy'], lw=1, ls='--',
                 color='tab:green', label='train accuracy')
        ax2.set_ylim(0, 1.05)
        ax2.set_ylabel('Score', weight='semibold', size=9)

        best = h.loc[h['val_macro_f1'].idxmax()]
        ax2.scatter([best['epoch']], [best['val_macro_f1']], color='black',
                    zorder=3, label='best epoch')

        for a in (ax, ax2):
            a.tick_params(axis='both', which='major', labelsize=9)
            a.yaxis.set_minor_locator(AutoMinorLocator())
        lines = ax.get_legend_handles_labels()
        lines2 = ax2.get_legend_handles_labels()
        ax.legend(lines[0] + lines2[0], lines[1] + lines2[1], fontsize=8,
                  loc='center right')
        plt.title(self.title, weight='bold')

        if self.filename:
            fig.savefig(fname=self.filename, dpi=150, format='png')
            plt.close(fig)
        return fig
