""" Provide ``apply_ablation``, the graph transforms behind the ablation
study.

Every transform returns a new graph: node ids are re-densified in their old
order and the old-to-new mapping is kept on ``DebateGraph.id_map``. Applying
a mode twice is the same as applying it once.

"""

# -- Imports -----------------------------------------------------------------
import logging

from reviewgraph.exceptions import AblationError
from reviewgraph.graph.debate import DebateGraph, Edge, Node
from reviewgraph.graph.schema import (
    AblationMode, NodeType, Relation, RelationGroup, RelationType)

logger = logging.getLogger(__name__)

_DROPPED_NODES = {
    AblationMode.NO_TITLE: NodeType.TITLE,
    AblationMode.NO_EVAL: NodeType.EVALUATION_DIMENSION,
}

_DROPPED_GROUPS = {
    AblationMode.NO_RAR: RelationGroup.REVIEWER_AUTHOR,
    AblationMode.NO_IRR: RelationGroup.INTER_REVIEWER,
}


# -- Ablation ----------------------------------------------------------------

def apply_ablation(g, mode):
    """ Function that removes one structural ingredient from a graph.

    Args:
        g (DebateGraph): A valid graph.

        mode (AblationMode or str): One of

            - ``full``: identity.
            - ``no_title``: drop the Title node and its incident edges.
            - ``no_eval``: drop the four dimension nodes and incident edges.
            - ``no_rar``: drop reviewer-author edges and their inverses.
            - ``no_irr``: drop inter-reviewer edges and their inverses.
            - ``homogeneous``: erase node types (texts are kept) and map
              every edge, inverses included, to ``connected``.

    Returns:
        DebateGraph: The transformed graph.

    Raises:
        AblationError: If the transform leaves no node, or a relation group
            is removed from a graph whose relation types were already erased.
    """
    try:
        mode = AblationMode(mode)
    except ValueError:
        raise AblationError("'{}' is not an ablation mode. Options are: {}"
                            "".format(mode, [m.value for m in AblationMode]))

    if mode is AblationMode.FULL or mode in g.ablations:
        return g

    nodes, edges = list(g.nodes), list(g.edges)

    if mode in _DROPPED_NODES:
        nodes = [n for n in nodes if n.node_type is not _DROPPED_NODES[mode]]
    elif mode in _DROPPED_GROUPS:
        if g.homogeneous:
            raise AblationError("Cannot drop {} edges from graph '{}': its "
                                "relation types are already erased."
                                "".format(_DROPPED_GROUPS[mode].value,
                                          g.graph_id))
        edges = [e for e in edges if e.group is not _DROPPED_GROUPS[mode]]
    else:
        connected = Relation(RelationType.CONNECTED)
        edges = [Edge(e.src, e.dst, connected) for e in edges]

    if not nodes:
        raise AblationError("Ablation '{}' removes every node of graph '{}'."
                            "".format(mode.value, g.graph_id))

    # -- Re-densify ids ------------------------------------------------------
    id_map = {n.id: new for new, n in enumerate(nodes)}
    nodes = [Node(id_map[n.id], n.node_type, n.text, n.speaker, n.dimension)
             for n in nodes]
    edges = [Edge(id_map[e.src], id_map[e.dst], e.relation) for e in edges
             if e.src in id_map and e.dst in id_map]

    logger.debug("Ablation '%s' on '%s': %d -> %d nodes, %d -> %d edges",
                 mode.value, g.graph_id, len(g.nodes), len(nodes),
                 len(g.edges), len(edges))

    return DebateGraph(g.graph_id, nodes, edges, label=g.label,
                       ablations=set(g.ablations) | {mode}, id_map=id_map)
