from .historyplot import HistoryPlot
