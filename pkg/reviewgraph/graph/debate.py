""" Provide the ``DebateGraph`` class and its node and edge records.

A ``DebateGraph`` is immutable once built. Construction builds the incoming
index that the model reads: for every node, the list of ``(source id,
relation)`` pairs sorted by source id and then by relation ordinal.

"""

# -- Imports -----------------------------------------------------------------
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from tabulate import tabulate

from reviewgraph.exceptions import GraphValidationError
from reviewgraph.graph.schema import (
    AblationMode, AgentRole, Dimension, GENERIC_NODE_TYPE, NodeType,
    Relation, RelationGroup, RelationType, endpoints)


# -- Node and Edge Records ---------------------------------------------------

@dataclass(frozen=True)
class Node(object):
    """ A debate graph node. ``speaker`` is set only on opinion nodes and
    ``dimension`` only on reviewer opinions.

    """
    id: int
    node_type: NodeType
    text: str
    speaker: Optional[AgentRole] = None
    dimension: Optional[Dimension] = None


@dataclass(frozen=True)
class Edge(object):
    src: int
    dst: int
    relation: Relation

    @property
    def group(self):
        return self.relation.group


# -- DebateGraph Class -------------------------------------------------------

class DebateGraph(object):
    """ Class to represent one paper's heterogeneous debate graph.

    """

    # -- Constructor ---------------------------------------------------------

    def __init__(self, graph_id, nodes, edges, **kwargs):
        """
        Args:
            graph_id (str): Identifier of the paper.

            nodes (list): :class:`Node` records, ids dense from 0.

            edges (list): :class:`Edge` records.

        Keyword Args:
            label (str): The decision, 'accept' or 'reject'. Default is
                ``None`` (unlabeled).

            ablations (iterable): :class:`AblationMode` values already applied
                to the graph. Default is none.

            id_map (dict): Old-to-new node id mapping recorded by the last
                ablation. Default is the identity.

        """
        allowed_keys = ['label', 'ablations', 'id_map']
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute. The "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        self.graph_id = str(graph_id)
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)

        self.label = kwargs.get('label', None)
        if self.label not in ['accept', 'reject', None]:
            raise ValueError("Label can only be 'accept', 'reject' or None, "
                             "not '{}'.".format(self.label))

        self.ablations = frozenset(
            AblationMode(m) for m in kwargs.get('ablations', ())
            if AblationMode(m) is not AblationMode.FULL)

        id_map = kwargs.get('id_map', None)
        if id_map is None:
            id_map = {n.id: n.id for n in self.nodes}
        self.id_map = dict(id_map)

        # -- Incoming index --------------------------------------------------
        self._by_id = {}
        for n in self.nodes:
            self._by_id.setdefault(n.id, n)
        known = set(self._by_id)
        index = {i: [] for i in known}
        for e in self.edges:
            if e.dst in known:
                index[e.dst].append((e.src, e.relation))
        for entries in index.values():
            entries.sort(key=lambda pair: (pair[0], pair[1].ordinal))
        self._incoming = {i: tuple(v) for i, v in index.items()}

        # Filled lazily by the model
        self._compiled = {}

    # -- Properties ----------------------------------------------------------

    @property
    def homogeneous(self):
        return AblationMode.HOMOGENEOUS in self.ablations

    @property
    def num_nodes(self):
        return len(self.nodes)

    # -- Lookups -------------------------------------------------------------

    def node(self, node_id):
        """ Return the node with id ``node_id``.

        Raises:
            ValueError: If no such node exists.
        """
        try:
            return self._by_id[node_id]
        except (KeyError, TypeError):
            raise ValueError("Unknown node id {} in graph '{}'."
                             "".format(node_id, self.graph_id))

    def type_key(self, node_id):
        """ Node type as seen by the model: the node's type value, or the
        generic 'node' key once the graph is homogenized.

        """
        if self.homogeneous:
            return GENERIC_NODE_TYPE
        return self.node(node_id).node_type.value

    def nodes_of_type(self, node_type):
        """ Ids of every node of type ``node_type`` (the set V_a), ascending.

        Args:
            node_type (NodeType or str): A node type, or 'node' for every node
                of a homogenized graph.

        Returns:
            list: Node ids.
        """
        if node_type == GENERIC_NODE_TYPE:
            return [n.id for n in self.nodes] if self.homogeneous else []
        node_type = NodeType(node_type)
        return [n.id for n in self.nodes if n.node_type is node_type]

    def incoming(self, node_id):
        """ Method that returns the incoming neighbours of a node, sorted by
        source id, then by relation ordinal.

        Args:
            node_id (int): Target node id.

        Returns:
            list: ``(source id, Relation)`` tuples.
        """
        if node_id not in self._incoming:
            raise ValueError("Unknown node id {} in graph '{}'."
                             "".format(node_id, self.graph_id))
        return list(self._incoming[node_id])

    def neighborhood(self, node_id):
        """ Distinct source ids of the incoming edges of a node (N(t)). """
        return sorted({s for s, _ in self.incoming(node_id)})

    # -- Statistics ----------------------------------------------------------

    def edge_counts(self, include_inverse=True):
        """ Count edges per relation group.

        Keyword Args:
            include_inverse (bool): Count inverse edges as well. Default is
                True.

        Returns:
            dict: ``{RelationGroup: count}`` with every group present.
        """
        counts = {g: 0 for g in RelationGroup}
        for e in self.edges:
            if include_inverse or not e.relation.inverse:
                counts[e.group] += 1
        return counts

    def relation_counts(self):
        """ Count edges per relation key, e.g. ``{'agree': 3, ...}``. """
        return dict(Counter(e.relation.key for e in self.edges))

    def summary(self):
        """ Return a table of node and edge counts. """
        rows = [[t.value, len(self.nodes_of_type(t))] for t in NodeType]
        rows += [[g.value + ' edges', c]
                 for g, c in self.edge_counts(include_inverse=False).items()]
        rows.append(['inverse edges',
                     sum(1 for e in self.edges if e.relation.inverse)])
        return tabulate(rows, headers=['', self.graph_id], tablefmt='simple')

    # -- Serialization -------------------------------------------------------

    def to_json(self):
        """ Serialize to the graph-file JSON text. """
        from reviewgraph.graph.io import dumps_graph
        return dumps_graph(self)

    @classmethod
    def from_json(cls, text):
        """ Parse a graph-file JSON text. """
        from reviewgraph.graph.io import loads_graph
        return loads_graph(text)

    # -- Comparison and string representation --------------------------------

    def __eq__(self, other):
        if not isinstance(other, DebateGraph):
            return NotImplemented
        return (self.graph_id == other.graph_id
                and self.nodes == other.nodes
                and self.edges == other.edges
                and self.label == other.label
                and self.ablations == other.ablations)

    def __hash__(self):
        return hash((self.graph_id, self.nodes, self.edges))

    def __repr__(self):
        return "DebateGraph('{}', nodes={}, edges={}, label={})".format(
            self.graph_id, len(self.nodes), len(self.edges), self.label)

    def __str__(self):
        return self.summary()


# -- Validation --------------------------------------------------------------

class ValidationReport(object):
    """ Outcome of :func:`validate_graph`: an ``ok`` flag and the list of
    violations.

    """

    def __init__(self, graph_id, violations):
        self.graph_id = graph_id
        self.violations = list(violations)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def raise_for_violations(self):
        """ Raise :class:`GraphValidationError` unless the report is ok. """
        if not self.ok:
            raise GraphValidationError(self.violations, self.graph_id)
        return self

    def __str__(self):
        if self.ok:
            return "Graph '{}': ok".format(self.graph_id)
        return "Graph '{}': {} violation(s)\n  {}".format(
            self.graph_id, len(self.violations),
            '\n  '.join(self.violations))


def _node_violations(n):
    out = []
    if not isinstance(n.text, str) or not n.text.strip():
        out.append("node {}: empty text".format(n.id))
    if n.node_type.is_opinion:
        if n.speaker is None:
            out.append("node {}: opinion node without speaker".format(n.id))
        elif (n.node_type is NodeType.REVIEWER_OPINION
              and not n.speaker.is_reviewer):
            out.append("node {}: reviewer opinion spoken by '{}'"
                       "".format(n.id, n.speaker.value))
        elif (n.node_type is NodeType.AUTHOR_OPINION
              and n.speaker is not AgentRole.AUTHOR):
            out.append("node {}: author opinion spoken by '{}'"
                       "".format(n.id, n.speaker.value))
    elif n.speaker is not None:
        out.append("node {}: speaker set on a {} node"
                   "".format(n.id, n.node_type.value))
    if n.node_type is NodeType.REVIEWER_OPINION:
        if n.dimension is None:
            out.append("node {}: reviewer opinion without dimension"
                       "".format(n.id))
    elif n.dimension is not None:
        out.append("node {}: dimension set on a {} node"
                   "".format(n.id, n.node_type.value))
    return out


def validate_graph(g):
    """ Check a graph against the schema. Never raises: every problem is
    collected in the returned report.

    Checks dense ids, the node invariants, the Title and dimension node
    counts (relaxed by the ablations recorded on the graph), legal
    meta-relations, removed relation groups and duplicate edges.

    Args:
        g (DebateGraph): The graph to check.

    Returns:
        ValidationReport
    """
    v = []
    by_id = {}

    # -- Nodes ---------------------------------------------------------------
    for i, n in enumerate(g.nodes):
        if n.id != i:
            v.append("node ids are not dense: position {} holds id {}"
                     "".format(i, n.id))
        by_id.setdefault(n.id, n)
        v.extend(_node_violations(n))

    titles = [n for n in g.nodes if n.node_type is NodeType.TITLE]
    dims = [n for n in g.nodes
            if n.node_type is NodeType.EVALUATION_DIMENSION]
    expected_titles = 0 if AblationMode.NO_TITLE in g.ablations else 1
    if len(titles) != expected_titles:
        v.append("expected {} title node(s), found {}"
                 "".format(expected_titles, len(titles)))
    if AblationMode.NO_EVAL in g.ablations:
        if dims:
            v.append("dimension nodes present after no_eval ablation")
    elif AblationMode.NO_TITLE not in g.ablations:
        names = sorted(n.text for n in dims)
        wanted = sorted(d.display_name for d in Dimension)
        if names != wanted:
            v.append("expected one dimension node per dimension {}, found {}"
                     "".format(wanted, names))

    # -- Edges ---------------------------------------------------------------
    seen = set()
    for e in g.edges:
        tag = "edge {} -[{}]-> {}".format(e.src, e.relation.key, e.dst)
        if e.src not in by_id or e.dst not in by_id:
            v.append("{}: unknown node id".format(tag))
            continue
        if g.homogeneous:
            if e.relation != Relation(RelationType.CONNECTED):
                v.append("{}: homogeneous graph edge is not 'connected'"
                         "".format(tag))
            continue
        pair = endpoints(e.relation)
        found = (by_id[e.src].node_type, by_id[e.dst].node_type)
        if pair is None or found != pair:
            v.append("{}: illegal meta-relation ({}, {}, {})".format(
                tag, found[0].value, e.relation.key, found[1].value))
        if (AblationMode.NO_RAR in g.ablations
                and e.group is RelationGroup.REVIEWER_AUTHOR):
            v.append("{}: reviewer-author edge after no_rar".format(tag))
        if (AblationMode.NO_IRR in g.ablations
                and e.group is RelationGroup.INTER_REVIEWER):
            v.append("{}: inter-reviewer edge after no_irr".format(tag))
        key = (e.src, e.dst, e.relation)
        if key in seen:
            v.append("{}: duplicate edge".format(tag))
        seen.add(key)

    return ValidationReport(g.graph_id, v)


def incoming(g, t):
    """ Incoming ``(source id, relation)`` pairs of node ``t``. """
    return g.incoming(t)
