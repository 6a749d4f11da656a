from .config import TrainConfig
from .optim import AdamState, adam_step
from .metrics import EvalReport, evaluate
from .stats import WelchResult, welch_t_test
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .trainer import (EarlyStopping, evaluate_split, predict_labels,
                      read_history, train, write_history)
