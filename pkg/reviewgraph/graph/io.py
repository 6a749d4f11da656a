""" Read and write graph files.

A graph file is one JSON object. It is checked against ``GRAPH_SCHEMA``
before decoding, and writing is deterministic so that the same graph always
produces the same bytes.

"""

# -- Imports -----------------------------------------------------------------
import json

import jsonschema

from reviewgraph.exceptions import GraphValidationError, NotJson
from reviewgraph.graph.debate import DebateGraph, Edge, Node
from reviewgraph.graph.schema import (
    AblationMode, AgentRole, Dimension, NodeType, Relation, RelationType)


# -- JSON Schema -------------------------------------------------------------

def _enum(cls):
    return [m.value for m in cls]


GRAPH_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["graph_id", "label", "nodes", "edges"],
    "additionalProperties": False,
    "properties": {
        "graph_id": {"type": "string"},
        "label": {"enum": ["accept", "reject", None]},
        "ablations": {
            "type": "array",
            "items": {"type": "string", "enum": _enum(AblationMode)},
            "uniqueItems": True,
        },
        "homogeneous": {"type": "boolean"},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "type", "text", "speaker", "dimension"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "type": {"type": "string", "enum": _enum(NodeType)},
                    "text": {"type": "string", "minLength": 1},
                    "speaker": {"enum": _enum(AgentRole) + [None]},
                    "dimension": {"enum": _enum(Dimension) + [None]},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "relation", "inverse"],
                "additionalProperties": False,
                "properties": {
                    "src": {"type": "integer", "minimum": 0},
                    "dst": {"type": "integer", "minimum": 0},
                    "relation": {"type": "string",
                                 "enum": _enum(RelationType)},
                    "inverse": {"type": "boolean"},
                },
            },
        },
    },
}


# -- Encoding ----------------------------------------------------------------

def graph_to_dict(g):
    """ Encode a graph as a plain dictionary in graph-file layout. """
    d = {
        'graph_id': g.graph_id,
        'label': g.label,
        'nodes': [{'id': n.id,
                   'type': n.node_type.value,
                   'text': n.text,
                   'speaker': n.speaker.value if n.speaker else None,
                   'dimension': n.dimension.value if n.dimension else None}
                  for n in g.nodes],
        'edges': [{'src': e.src,
                   'dst': e.dst,
                   'relation': e.relation.type.value,
                   'inverse': e.relation.inverse}
                  for e in g.edges],
    }
    if g.ablations:
        d['ablations'] = sorted(m.value for m in g.ablations)
        d['homogeneous'] = g.homogeneous
    return d


def graph_from_dict(d):
    """ Decode a graph-file dictionary.

    Raises:
        GraphValidationError: If the dictionary does not follow the schema.
    """
    try:
        jsonschema.validate(d, GRAPH_SCHEMA)
    except jsonschema.ValidationError as err:
        path = '/'.join(str(p) for p in err.absolute_path)
        raise GraphValidationError(["{}: {}".format(path or '<root>',
                                                    err.message)],
                                   d.get('graph_id')
                                   if isinstance(d, dict) else None)

    nodes = [Node(n['id'], NodeType(n['type']), n['text'],
                  AgentRole(n['speaker']) if n['speaker'] else None,
                  Dimension(n['dimension']) if n['dimension'] else None)
             for n in d['nodes']]
    edges = [Edge(e['src'], e['dst'],
                  Relation(RelationType(e['relation']), e['inverse']))
             for e in d['edges']]
    ablations = set(d.get('ablations', []))
    if d.get('homogeneous', False):
        ablations.add(AblationMode.HOMOGENEOUS.value)
    return DebateGraph(d['graph_id'], nodes, edges, label=d['label'],
                       ablations=ablations)


def dumps_graph(g):
    """ Serialize a graph to a JSON string (deterministic). """
    return json.dumps(graph_to_dict(g), indent=1, ensure_ascii=False) + '\n'


def loads_graph(text):
    """ Parse a graph from a JSON string or bytes.

    Raises:
        NotJson: If the input is not JSON.
        GraphValidationError: If it does not follow the graph schema.
    """
    try:
        d = json.loads(text)
    except (ValueError, TypeError) as err:
        raise NotJson("Graph file is not valid JSON: {}".format(err))
    return graph_from_dict(d)


# -- Files -------------------------------------------------------------------

def save_graph(g, path):
    """ Write a graph file. """
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_graph(g))


def load_graph(path):
    """ Read a graph file. """
    with open(path, 'r', encoding='utf-8') as f:
        return loads_graph(f.read())
