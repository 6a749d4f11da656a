from .schema import (AblationMode, AgentRole, Dimension, NodeType,
                     Relation, RelationGroup, RelationType, REVIEWERS,
                     legal_meta_relations, meta_relation_list,
                     relation_vocabulary)
from .debate import DebateGraph, Edge, Node, ValidationReport, incoming, \
    validate_graph
from .ablation import apply_ablation
from .io import dumps_graph, load_graph, loads_graph, save_graph
