""" Parse dimension classifications and read or write dimension-assignment
files (JSON lines of ``{"speaker", "text", "category"}``).

"""

# -- Imports -----------------------------------------------------------------
import json
import re
from dataclasses import dataclass

from reviewgraph import normalize_text
from reviewgraph.exceptions import NotJson, UnknownCategory
from reviewgraph.extraction.triples import locate_json
from reviewgraph.graph.schema import AgentRole, Dimension


# -- DimensionAssignment -----------------------------------------------------

@dataclass(frozen=True)
class DimensionAssignment(object):
    speaker: AgentRole
    text: str
    dimension: Dimension

    @property
    def key(self):
        """ The opinion identity: speaker and normalized text. """
        return self.speaker, normalize_text(self.text)

    def to_dict(self):
        return {'speaker': self.speaker.value,
                'text': normalize_text(self.text),
                'category': self.dimension.value}


def parse_category(name):
    """ Map a category name onto a :class:`Dimension`. Case, spaces,
    underscores and a leading list number ('1. ') are ignored.

    Raises:
        UnknownCategory: If the name is not one of the four dimensions.
    """
    cleaned = re.sub(r'^\s*\d+\s*[.)]\s*', '', str(name))
    dim = Dimension.from_name(cleaned)
    if dim is None:
        raise UnknownCategory("'{}' is not an evaluation dimension. Options "
                              "are: {}".format(name, [d.display_name
                                                      for d in Dimension]))
    return dim


def parse_dimension_reply(text):
    """ Parse a classification reply of the form ``{"category": "..."}``.

    Args:
        text (str or bytes): The raw reply.

    Returns:
        Dimension

    Raises:
        NotJson: If the reply holds no JSON object.
        UnknownCategory: If the category is missing or unknown.
    """
    obj = locate_json(text)
    if 'category' not in obj:
        raise UnknownCategory("Reply has no 'category' field: {}"
                              "".format(obj))
    return parse_category(obj['category'])


# -- Assignment files --------------------------------------------------------

def write_assignments(assignments, path):
    """ Write assignments as JSON lines, in the given order. """
    with open(path, 'w', encoding='utf-8') as f:
        for a in assignments:
            f.write(json.dumps(a.to_dict(), ensure_ascii=False) + '\n')


def read_assignments(path):
    """ Read a JSON-lines assignment file.

    Raises:
        NotJson: On an undecodable line.
        UnknownCategory: On an unknown category.
    """
    out = []
    with open(path, 'r', encoding='utf-8') as f:
        for n, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                speaker = AgentRole(d['speaker'])
                text = d['text']
            except (ValueError, KeyError, TypeError) as err:
                raise NotJson("{}:{}: bad assignment record ({})"
                              "".format(path, n, err))
            out.append(DimensionAssignment(speaker, text,
                                           parse_category(d.get('category'))))
    return out
