""" Provide the type vocabulary of the debate graph: node types, evaluation
dimensions, relation types, speakers, ablation modes and the meta-relation
table.

"""

# -- Imports -----------------------------------------------------------------
from dataclasses import dataclass
from enum import Enum

from reviewgraph.data import dimension_data


# -- Node Types --------------------------------------------------------------

class NodeType(Enum):
    """ The four node types of a debate graph. """
    TITLE = 'title'
    EVALUATION_DIMENSION = 'evaluation_dimension'
    REVIEWER_OPINION = 'reviewer_opinion'
    AUTHOR_OPINION = 'author_opinion'

    @property
    def is_opinion(self):
        return self in (NodeType.REVIEWER_OPINION, NodeType.AUTHOR_OPINION)


# Pooling order of the classification head
NODE_TYPE_ORDER = [NodeType.TITLE, NodeType.EVALUATION_DIMENSION,
                   NodeType.REVIEWER_OPINION, NodeType.AUTHOR_OPINION]

# Type key shared by every node of a homogenized graph
GENERIC_NODE_TYPE = 'node'


# -- Evaluation Dimensions ---------------------------------------------------

class Dimension(Enum):
    """ The four evaluation dimensions. Each graph holds one node per
    dimension, whose text is the display name.

    """
    METHODOLOGICAL_NOVELTY = 'methodological_novelty'
    EXPERIMENTAL_COMPLETENESS = 'experimental_completeness'
    MOTIVATION_CLARITY = 'motivation_clarity'
    WRITING_FLUENCY = 'writing_fluency'

    @property
    def display_name(self):
        return dimension_data[self.value]['name']

    @classmethod
    def from_name(cls, name):
        """ Match a category name, ignoring case, spaces, dashes and
        underscores.

        Args:
            name (str): e.g. 'Writing Fluency' or 'writing_fluency'.

        Returns:
            Dimension, or None when nothing matches.
        """
        key = '_'.join(str(name).lower().replace('-', ' ')
                       .replace('_', ' ').split())
        for dim in cls:
            if dim.value == key:
                return dim
        return None


# -- Speakers ----------------------------------------------------------------

class AgentRole(Enum):
    """ The five debate agents. Opinion nodes carry one of the first four as
    their speaker.

    """
    REVIEWER1 = 'reviewer1'
    REVIEWER2 = 'reviewer2'
    REVIEWER3 = 'reviewer3'
    AUTHOR = 'author'
    SENIOR_REVIEWER = 'senior_reviewer'

    @property
    def is_reviewer(self):
        return self in REVIEWERS

    @property
    def display_name(self):
        """ Name used inside prompts and triple strings, e.g. 'Reviewer 2'.
        """
        if self.is_reviewer:
            return 'Reviewer {}'.format(self.value[-1])
        elif self is AgentRole.AUTHOR:
            return 'Author'
        return 'Senior Reviewer'

    @classmethod
    def from_display_name(cls, name):
        """ Parse 'Reviewer 1', 'reviewer1', 'Author' and similar spellings.

        Returns:
            AgentRole, or None when the name is not a debate speaker.
        """
        key = ''.join(str(name).lower().split())
        for role in cls:
            if role.value.replace('_', '') == key:
                return role
        return None


REVIEWERS = (AgentRole.REVIEWER1, AgentRole.REVIEWER2, AgentRole.REVIEWER3)


# -- Relation Types ----------------------------------------------------------

class RelationGroup(Enum):
    STRUCTURAL = 'structural'
    INTER_REVIEWER = 'inter_reviewer'
    REVIEWER_AUTHOR = 'reviewer_author'
    HOMOGENEOUS = 'homogeneous'


class RelationType(Enum):
    """ Edge types. Declaration order is the relation ordinal used to sort
    incoming edges.

    """
    HAS_ASPECT = 'has_aspect'
    REVIEWED_BY = 'reviewed_by'
    AGREE = 'agree'
    DISAGREE = 'disagree'
    COMPLEMENT = 'complement'
    PROGRESSIVE = 'progressive'
    INDEPENDENT = 'independent'
    ACCEPT = 'accept'
    REJECT = 'reject'
    CLARIFY = 'clarify'
    COMPROMISE = 'compromise'
    EXTEND = 'extend'
    NEUTRAL = 'neutral'
    CONNECTED = 'connected'

    @property
    def group(self):
        return _GROUP_OF[self]

    @property
    def ordinal(self):
        return _ORDINALS[self]


_ORDINALS = {r: i for i, r in enumerate(RelationType)}

_GROUP_OF = {
    RelationType.HAS_ASPECT: RelationGroup.STRUCTURAL,
    RelationType.REVIEWED_BY: RelationGroup.STRUCTURAL,
    RelationType.CONNECTED: RelationGroup.HOMOGENEOUS,
}
_GROUP_OF.update({r: RelationGroup.INTER_REVIEWER for r in [
    RelationType.AGREE, RelationType.DISAGREE, RelationType.COMPLEMENT,
    RelationType.PROGRESSIVE, RelationType.INDEPENDENT]})
_GROUP_OF.update({r: RelationGroup.REVIEWER_AUTHOR for r in [
    RelationType.ACCEPT, RelationType.REJECT, RelationType.CLARIFY,
    RelationType.COMPROMISE, RelationType.EXTEND, RelationType.NEUTRAL]})


def relations_in_group(group):
    """ List the relation types of a group in ordinal order. """
    return [r for r in RelationType if r.group is group]


# -- Relation (type + inverse flag) ------------------------------------------

@dataclass(frozen=True)
class Relation(object):
    """ An edge label: a relation type, optionally wrapped as its inverse.
    The inverse swaps the legal (source, target) node types.

    """
    type: RelationType
    inverse: bool = False

    @property
    def key(self):
        """ Stable string key, e.g. 'agree' or 'inverse_agree'. """
        if self.inverse:
            return 'inverse_' + self.type.value
        return self.type.value

    @property
    def ordinal(self):
        return 2 * self.type.ordinal + int(self.inverse)

    @property
    def group(self):
        return self.type.group

    def inverted(self):
        return Relation(self.type, not self.inverse)

    @classmethod
    def from_key(cls, key):
        if key.startswith('inverse_'):
            return cls(RelationType(key[len('inverse_'):]), True)
        return cls(RelationType(key))

    def __str__(self):
        return self.key


# -- Meta-Relations ----------------------------------------------------------

_ENDPOINTS = {
    RelationGroup.INTER_REVIEWER: (NodeType.REVIEWER_OPINION,
                                   NodeType.REVIEWER_OPINION),
    RelationGroup.REVIEWER_AUTHOR: (NodeType.REVIEWER_OPINION,
                                    NodeType.AUTHOR_OPINION),
}


def endpoints(relation):
    """ Return the legal (source type, target type) pair of a relation.

    Args:
        relation (Relation): Edge label. ``CONNECTED`` has no typed
            endpoints.

    Returns:
        tuple: (NodeType, NodeType), or None for ``CONNECTED``.
    """
    rtype = relation.type
    if rtype is RelationType.HAS_ASPECT:
        pair = (NodeType.TITLE, NodeType.EVALUATION_DIMENSION)
    elif rtype is RelationType.REVIEWED_BY:
        pair = (NodeType.REVIEWER_OPINION, NodeType.EVALUATION_DIMENSION)
    elif rtype is RelationType.CONNECTED:
        return None
    else:
        pair = _ENDPOINTS[rtype.group]
    if relation.inverse:
        return pair[1], pair[0]
    return pair


def forward_relations():
    """ The 13 typed forward relations in ordinal order. """
    return [Relation(r) for r in RelationType
            if r is not RelationType.CONNECTED]


def relation_vocabulary(use_inverse_edges=True):
    """ Relations a heterogeneous model holds parameters for, in ordinal
    order: 13 forward relations, plus their 13 inverses when enabled.

    """
    forward = forward_relations()
    if not use_inverse_edges:
        return forward
    both = forward + [r.inverted() for r in forward]
    return sorted(both, key=lambda r: r.ordinal)


def meta_relation_list(use_inverse_edges=True):
    """ Ordered list of the legal meta-relations
    ``(source type, relation, target type)``.

    """
    out = []
    for rel in relation_vocabulary(use_inverse_edges):
        src, dst = endpoints(rel)
        out.append((src, rel, dst))
    return out


def legal_meta_relations(use_inverse_edges=True):
    """ Return the set of legal meta-relations. There are 13 forward
    meta-relations: the paper-dimension relation, the opinion-dimension
    relation, five inter-reviewer and six reviewer-author relations. With
    inverse edges enabled the 13 inverses are included as well.

    Args:
        use_inverse_edges (bool): Include the inverse meta-relations.

    Returns:
        set: Tuples of ``(NodeType, Relation, NodeType)``.
    """
    return set(meta_relation_list(use_inverse_edges))


# -- Ablation Modes ----------------------------------------------------------

class AblationMode(Enum):
    FULL = 'full'
    NO_TITLE = 'no_title'
    NO_EVAL = 'no_eval'
    NO_RAR = 'no_rar'
    NO_IRR = 'no_irr'
    HOMOGENEOUS = 'homogeneous'
