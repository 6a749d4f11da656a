from .config import ModelConfig
from .hgt import (CLASSES, ForwardTrace, HgtParams, compile_graph,
                  featurize, forward, graph_loss, hgt_attention, hgt_layer,
                  hgt_message, init_params, label_index,
                  node_embedding_matrix, parameter_count, predict)
