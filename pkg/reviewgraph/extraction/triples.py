""" Parse the triple-extraction reply of the language model.

The reply holds one JSON object with two arrays of strings. Every string is
one opinion triplet in the form::

    (Reviewer 1: 'sentence', Author: 'sentence', Accept)

Quote characters vary between replies, and sentences contain commas and
apostrophes, so the parser splits on the ``Speaker:`` anchors instead of
pairing quotes.

"""

# -- Imports -----------------------------------------------------------------
import json
import logging
import re
from dataclasses import dataclass, field
from typing import List

from reviewgraph import normalize_text
from reviewgraph.exceptions import (
    MalformedBatch, MalformedTriple, MissingArrayKey, NotJson,
    UnknownRelationLabel, WrongGroupSpeaker)
from reviewgraph.graph.schema import (
    AgentRole, RelationGroup, relations_in_group)

logger = logging.getLogger(__name__)

RAR_KEY = 'Reviewer_Author_Relations'
IRR_KEY = 'Inter_Reviewer_Relations'

# Fraction of malformed elements above which a batch is rejected
MAX_MALFORMED_RATIO = 0.5

QUOTE_CHARS = '\'"`‘’“”'

_SPEAKER = r'(Reviewer\s*\d+|Author)\s*:'
_FIRST_ANCHOR = re.compile(r'^\(?\s*' + _SPEAKER)
_SECOND_ANCHOR = re.compile(r'[' + QUOTE_CHARS + r']\s*,\s*' + _SPEAKER)
_SECOND_ANCHOR_LOOSE = re.compile(r',\s*' + _SPEAKER)


# -- OpinionTriplet ----------------------------------------------------------

@dataclass(frozen=True)
class OpinionTriplet(object):
    """ One extracted pair of opinion statements and the raw relation label
    linking them.

    """
    speaker_a: AgentRole
    text_a: str
    speaker_b: AgentRole
    text_b: str
    relation_label: str
    group: RelationGroup

    @property
    def relation(self):
        """ The canonical :class:`RelationType` of the raw label. """
        return canonical_relation(self.relation_label, self.group)


def _clean_text(text):
    text = text.strip()
    if text.endswith(','):
        text = text[:-1]
    return normalize_text(text.strip().strip(QUOTE_CHARS))


def _speaker(raw):
    role = AgentRole.from_display_name(raw)
    if role is None or role is AgentRole.SENIOR_REVIEWER:
        raise MalformedTriple("'{}' is not a debate speaker.".format(raw))
    return role


def parse_triple_string(s, group):
    """ Function that parses one element of an extraction array.

    Args:
        s (str): The element, e.g. ``"(Reviewer 2: 'text', Reviewer 3:
            'text', Disagree)"``.

        group (RelationGroup): ``REVIEWER_AUTHOR`` or ``INTER_REVIEWER``, the
            array the element was found in.

    Returns:
        OpinionTriplet: The triplet, with the raw relation label.

    Raises:
        MalformedTriple: If the element does not follow the pattern.
        WrongGroupSpeaker: If the speakers do not fit the group.
    """
    if not isinstance(s, str):
        raise MalformedTriple("Triple element is not a string: {!r}"
                              "".format(s))
    body = s.strip().rstrip('.,;').rstrip()
    if body.endswith(')'):
        body = body[:-1]

    first = _FIRST_ANCHOR.match(body)
    if first is None:
        raise MalformedTriple("No leading speaker tag in {!r}".format(s))

    second = (_SECOND_ANCHOR.search(body, first.end())
              or _SECOND_ANCHOR_LOOSE.search(body, first.end()))
    if second is None:
        raise MalformedTriple("No second speaker tag in {!r}".format(s))

    # The quote before the second anchor belongs to the first sentence
    split_at = second.start() + 1 if body[second.start()] in QUOTE_CHARS \
        else second.start()
    text_a = _clean_text(body[first.end():split_at])

    rest = body[second.end():]
    if ',' not in rest:
        raise MalformedTriple("No relation label in {!r}".format(s))
    text_b, label = rest.rsplit(',', 1)
    text_b = _clean_text(text_b)
    label = label.strip().strip(QUOTE_CHARS + '.').strip()

    if not text_a or not text_b or not label:
        raise MalformedTriple("Empty sentence or label in {!r}".format(s))

    speaker_a = _speaker(first.group(1))
    speaker_b = _speaker(second.group(1))

    group = RelationGroup(group)
    if group is RelationGroup.REVIEWER_AUTHOR:
        if not speaker_a.is_reviewer or speaker_b is not AgentRole.AUTHOR:
            raise WrongGroupSpeaker(
                "Reviewer-author triplet must pair a reviewer with the "
                "author, found {} and {}.".format(speaker_a.display_name,
                                                  speaker_b.display_name))
    elif group is RelationGroup.INTER_REVIEWER:
        if not (speaker_a.is_reviewer and speaker_b.is_reviewer):
            raise WrongGroupSpeaker(
                "Inter-reviewer triplet must pair two reviewers, found {} and"
                " {}.".format(speaker_a.display_name, speaker_b.display_name))
    else:
        raise ValueError("Triplets belong to the reviewer_author or "
                         "inter_reviewer group, not '{}'.".format(group.value))

    return OpinionTriplet(speaker_a, text_a, speaker_b, text_b, label, group)


def canonical_relation(label, group):
    """ Map a raw label onto a relation type of its group, ignoring case.

    Args:
        label (str): e.g. 'Accept' or 'progressive'.

        group (RelationGroup): The group the label must belong to.

    Returns:
        RelationType

    Raises:
        UnknownRelationLabel: If the label is not one of the group's labels.
    """
    key = str(label).strip().strip(QUOTE_CHARS + '.').strip().lower()
    for rtype in relations_in_group(RelationGroup(group)):
        if rtype.value == key:
            return rtype
    raise UnknownRelationLabel(label, RelationGroup(group).value)


def render_triple_string(t):
    """ Write a triplet back in the extraction output format. """
    return "({}: '{}', {}: '{}', {})".format(
        t.speaker_a.display_name, t.text_a, t.speaker_b.display_name,
        t.text_b, t.relation.value.capitalize())


# -- JSON location -----------------------------------------------------------

def locate_json(text):
    """ Find the JSON object inside a model reply. Code fences and prose
    around the object are skipped; the longest decodable ``{...}`` span wins.

    Args:
        text (str or bytes): The raw reply.

    Returns:
        dict: The decoded object.

    Raises:
        NotJson: If the reply holds no JSON object.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode('utf-8', errors='replace')
    decoder = json.JSONDecoder()
    best, best_len = None, -1
    start = text.find('{')
    while start != -1:
        try:
            obj, end = decoder.raw_decode(text, start)
        except ValueError:
            pass
        else:
            if isinstance(obj, dict) and end - start > best_len:
                best, best_len = obj, end - start
        start = text.find('{', start + 1)
    if best is None:
        raise NotJson("No JSON object found in reply: {!r}"
                      "".format(text[:80]))
    return best


# -- TripleBatch -------------------------------------------------------------

@dataclass
class TripleBatch(object):
    """ Both triplet arrays of one paper, plus the elements that were
    skipped as ``(raw element, reason)`` pairs.

    """
    graph_id: str
    reviewer_author: List[OpinionTriplet] = field(default_factory=list)
    inter_reviewer: List[OpinionTriplet] = field(default_factory=list)
    malformed: List[tuple] = field(default_factory=list)

    @property
    def triplets(self):
        return self.reviewer_author + self.inter_reviewer

    @property
    def malformed_ratio(self):
        total = len(self.triplets) + len(self.malformed)
        return len(self.malformed) / total if total else 0.0

    def to_dict(self):
        return {RAR_KEY: [render_triple_string(t)
                          for t in self.reviewer_author],
                IRR_KEY: [render_triple_string(t)
                          for t in self.inter_reviewer]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False)


def parse_triple_batch(text, graph_id):
    """ Function that parses a complete extraction reply. Malformed elements
    are skipped and reported on ``TripleBatch.malformed``; the batch fails
    only when more than half of its elements are malformed. An element whose
    label is not a label of its array counts as malformed.

    Args:
        text (str or bytes): The reply, or a triple file.

        graph_id (str): The paper the reply belongs to.

    Returns:
        TripleBatch

    Raises:
        NotJson: If the reply holds no JSON object.
        MissingArrayKey: If either array is missing.
        MalformedBatch: If more than half of the elements are malformed.
    """
    obj = locate_json(text)
    for key in (RAR_KEY, IRR_KEY):
        if not isinstance(obj.get(key), list):
            raise MissingArrayKey("Extraction reply for '{}' lacks the '{}' "
                                  "array.".format(graph_id, key))

    batch = TripleBatch(graph_id)
    for key, group, target in [
            (RAR_KEY, RelationGroup.REVIEWER_AUTHOR, batch.reviewer_author),
            (IRR_KEY, RelationGroup.INTER_REVIEWER, batch.inter_reviewer)]:
        for element in obj[key]:
            try:
                triplet = parse_triple_string(element, group)
                canonical_relation(triplet.relation_label, group)
            except (MalformedTriple, WrongGroupSpeaker,
                    UnknownRelationLabel) as err:
                logger.warning("Skipping triple in '%s': %s", graph_id, err)
                batch.malformed.append((element, str(err)))
            else:
                target.append(triplet)

    if batch.malformed_ratio > MAX_MALFORMED_RATIO:
        raise MalformedBatch("{} of {} triples in '{}' are malformed."
                             "".format(len(batch.malformed),
                                       len(batch.malformed)
                                       + len(batch.triplets), graph_id))
    return batch
