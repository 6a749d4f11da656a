""" Provide ``build_graph``, which turns a title, a triple batch and the
dimension assignments into a ``DebateGraph``.

Node ids: the Title node is 0, the dimension nodes 1 to 4 in dimension
order, then one node per distinct ``(speaker, normalized text)`` opinion in
order of first appearance (reviewer-author triplets first, the first
speaker of each triplet before the second).

Edge order: has_aspect, reviewed_by, reviewer-author and inter-reviewer
edges in triplet order; inverse edges follow in the same order.

"""

# -- Imports -----------------------------------------------------------------
import logging

from reviewgraph import normalize_text
from reviewgraph.exceptions import (
    InconsistentDimension, MissingDimensionAssignment)
from reviewgraph.graph.ablation import apply_ablation
from reviewgraph.graph.debate import DebateGraph, Edge, Node, validate_graph
from reviewgraph.graph.schema import (
    AblationMode, Dimension, NodeType, Relation, RelationType)

logger = logging.getLogger(__name__)


def opinion_keys(batch):
    """ Distinct ``(speaker, normalized text)`` keys of a batch, in node
    order.

    """
    seen = {}
    for t in batch.triplets:
        for speaker, text in [(t.speaker_a, t.text_a),
                              (t.speaker_b, t.text_b)]:
            seen.setdefault((speaker, normalize_text(text)), None)
    return list(seen)


def reviewer_opinion_keys(batch):
    """ Distinct reviewer opinions of a batch; these need a dimension. """
    return [k for k in opinion_keys(batch) if k[0].is_reviewer]


def _dimension_lookup(dims):
    lookup = {}
    for a in dims:
        known = lookup.get(a.key)
        if known is not None and known is not a.dimension:
            raise InconsistentDimension(
                "Opinion {!r} of {} is assigned both '{}' and '{}'."
                "".format(a.key[1], a.key[0].display_name, known.value,
                          a.dimension.value))
        lookup[a.key] = a.dimension
    return lookup


# -- Graph Builder -----------------------------------------------------------

def build_graph(title, batch, dims, **kwargs):
    """ Function that instantiates the debate graph of one paper.

    Args:
        title (str): The paper title.

        batch (TripleBatch): The parsed extraction reply.

        dims (list): :class:`DimensionAssignment` records covering every
            distinct reviewer opinion of the batch.

    Keyword Args:
        use_inverse_edges (bool): Add the inverse of every edge. Default is
            True.

        label (str): The decision, 'accept' or 'reject'. Default is None.

        ablation (AblationMode or str): Ablation applied to the built graph.
            Default is 'full'.

    Returns:
        DebateGraph: A graph that passes :func:`validate_graph`.

    Raises:
        MissingDimensionAssignment: Lists the reviewer opinions without a
            dimension.
        InconsistentDimension: If one opinion is assigned two dimensions.
    """
    allowed_keys = ['use_inverse_edges', 'label', 'ablation']
    for key in kwargs:
        if key not in allowed_keys:
            raise AttributeError("'{}' is not a valid attribute. The "
                                 "allowed attributes are: {}"
                                 "".format(key, allowed_keys))
    use_inverse_edges = kwargs.get('use_inverse_edges', True)
    label = kwargs.get('label', None)
    ablation = kwargs.get('ablation', AblationMode.FULL)

    title = normalize_text(title)
    if not title:
        raise ValueError("Paper title of '{}' is empty.".format(batch.graph_id))

    lookup = _dimension_lookup(dims)
    orphans = [k for k in reviewer_opinion_keys(batch) if k not in lookup]
    if orphans:
        raise MissingDimensionAssignment(
            ["{}: {}".format(s.display_name, t) for s, t in orphans])

    # -- Nodes ---------------------------------------------------------------
    nodes = [Node(0, NodeType.TITLE, title)]
    dim_id = {}
    for d in Dimension:
        dim_id[d] = len(nodes)
        nodes.append(Node(len(nodes), NodeType.EVALUATION_DIMENSION,
                          d.display_name))

    op_id = {}
    for speaker, text in opinion_keys(batch):
        op_id[(speaker, text)] = len(nodes)
        if speaker.is_reviewer:
            nodes.append(Node(len(nodes), NodeType.REVIEWER_OPINION, text,
                              speaker, lookup[(speaker, text)]))
        else:
            nodes.append(Node(len(nodes), NodeType.AUTHOR_OPINION, text,
                              speaker))

    # -- Edges ---------------------------------------------------------------
    edges = [Edge(0, dim_id[d], Relation(RelationType.HAS_ASPECT))
             for d in Dimension]
    edges += [Edge(n.id, dim_id[n.dimension],
                   Relation(RelationType.REVIEWED_BY))
              for n in nodes if n.node_type is NodeType.REVIEWER_OPINION]

    seen = set(edges)
    for t in batch.reviewer_author + batch.inter_reviewer:
        e = Edge(op_id[(t.speaker_a, normalize_text(t.text_a))],
                 op_id[(t.speaker_b, normalize_text(t.text_b))],
                 Relation(t.relation))
        if e in seen:
            logger.info("Duplicate triplet collapsed in '%s': %s",
                        batch.graph_id, e)
            continue
        seen.add(e)
        edges.append(e)

    if use_inverse_edges:
        edges += [Edge(e.dst, e.src, e.relation.inverted()) for e in edges]

    g = DebateGraph(batch.graph_id, nodes, edges, label=label)
    validate_graph(g).raise_for_violations()
    logger.info("Built graph '%s': %d nodes, %d edges", g.graph_id,
                len(g.nodes), len(g.edges))
    return apply_ablation(g, ablation)
