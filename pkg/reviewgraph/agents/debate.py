""" Provide the ``Transcript`` class and ``simulate_debate``, the staged
reviewer-author conversation.

"""

# -- Imports -----------------------------------------------------------------
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List

from reviewgraph.data import prompts as default_prompts
from reviewgraph.graph.schema import AgentRole, REVIEWERS

logger = logging.getLogger(__name__)


# -- Stages and messages -----------------------------------------------------

class Stage(Enum):
    INITIAL_REVIEW = 'initial_review'
    AUTHOR_REBUTTAL = 'author_rebuttal'
    RE_EVALUATION = 're_evaluation'
    META_REVIEW = 'meta_review'


STAGE_ORDER = [Stage.INITIAL_REVIEW, Stage.AUTHOR_REBUTTAL,
               Stage.RE_EVALUATION, Stage.META_REVIEW]


@dataclass
class Message(object):
    role: AgentRole
    content: str
    attachments: List[dict] = field(default_factory=list)

    def to_dict(self):
        return {'role': self.role.value, 'content': self.content,
                'attachments': [dict(a) for a in self.attachments]}

    @classmethod
    def from_dict(cls, d):
        return cls(AgentRole(d['role']), d['content'],
                   list(d.get('attachments', [])))


@dataclass
class StageRecord(object):
    stage: Stage
    messages: List[Message] = field(default_factory=list)


# -- Paper -------------------------------------------------------------------

@dataclass
class Paper(object):
    """ The paper under debate. Attachments are opaque payload references,
    ``{"kind": "figure"|"table", "url": ..., "description": ...}``.

    """
    paper_id: str
    title: str
    body: str
    attachments: List[dict] = field(default_factory=list)

    @classmethod
    def from_dict(cls, d, paper_id=None):
        return cls(paper_id or d.get('paper_id', ''), d.get('title', ''),
                   d.get('body', ''), list(d.get('attachments', [])))


def load_paper(path, paper_id):
    """ Read a paper file: JSON with ``title``, ``body`` and optional
    ``attachments``.

    """
    with open(path, 'r', encoding='utf-8') as f:
        return Paper.from_dict(json.load(f), paper_id)


# -- Transcript Class --------------------------------------------------------

class Transcript(object):
    """ Class to represent the recorded debate of one paper.

    The stages must follow InitialReview, AuthorRebuttal, ReEvaluation and,
    optionally, MetaReview. The initial review holds one message per
    reviewer.

    """

    def __init__(self, paper_id, stages):
        self.paper_id = paper_id
        self.stages = list(stages)

        order = [s.stage for s in self.stages]
        if order not in (STAGE_ORDER[:3], STAGE_ORDER):
            raise ValueError("Transcript '{}' has stages {}; expected {}."
                             "".format(paper_id, [s.value for s in order],
                                       [s.value for s in STAGE_ORDER]))
        speakers = [m.role for m in self.stages[0].messages]
        if sorted(speakers, key=lambda r: r.value) != list(REVIEWERS):
            raise ValueError("The initial review of '{}' must hold one "
                             "message per reviewer, found {}."
                             "".format(paper_id, [r.value for r in speakers]))

    def messages(self, stage):
        """ Messages of a stage, or an empty list if the stage is absent. """
        for s in self.stages:
            if s.stage is Stage(stage):
                return list(s.messages)
        return []

    def to_dict(self):
        return {'paper_id': self.paper_id,
                'stages': [{'stage': s.stage.value,
                            'messages': [m.to_dict() for m in s.messages]}
                           for s in self.stages]}

    @classmethod
    def from_dict(cls, d):
        return cls(d['paper_id'],
                   [StageRecord(Stage(s['stage']),
                                [Message.from_dict(m) for m in s['messages']])
                    for s in d['stages']])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + '\n'

    def __eq__(self, other):
        return isinstance(other, Transcript) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return "Transcript('{}', {} stages)".format(self.paper_id,
                                                    len(self.stages))


def save_transcript(transcript, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(transcript.to_json())


def load_transcript(path):
    with open(path, 'r', encoding='utf-8') as f:
        return Transcript.from_dict(json.load(f))


# -- Rendering helpers -------------------------------------------------------

def _user(content, attachments=None):
    m = {'role': 'user', 'content': content}
    if attachments:
        m['attachments'] = list(attachments)
    return m


def _assistant(content):
    return {'role': 'assistant', 'content': content}


def render_reviews(messages):
    """ Format agent messages as 'Reviewer N:' blocks. """
    return '\n\n'.join('{}:\n{}'.format(m.role.display_name, m.content)
                       for m in messages)


def paper_turns(paper, prompts=None):
    """ The opening of every agent conversation: the paper fed turn by turn,
    text first and then each figure or table, with canned acknowledgements.

    """
    p = prompts or default_prompts
    turns = [{'role': 'system', 'content': p['debate_system']},
             _user(p['paper_intro']), _assistant(p['paper_intro_ack']),
             _user('Title: {}\n\n{}'.format(paper.title, paper.body)),
             _assistant(p['paper_text_ack'])]
    counts = {'figure': 0, 'table': 0}
    for a in paper.attachments:
        kind = 'table' if a.get('kind') == 'table' else 'figure'
        counts[kind] += 1
        caption = a.get('description') or a.get('url', '')
        turns.append(_user('{} {}: {}'.format(kind.capitalize(),
                                              counts[kind], caption), [a]))
        turns.append(_assistant(p['{}_ack'.format(kind)]))
    return turns


# -- simulate_debate ---------------------------------------------------------

def simulate_debate(paper, client, prompts=None, meta_review=True):
    """ Function that runs the staged debate of one paper. Turns are issued
    one after the other: three reviews, the author rebuttal, three
    re-evaluations and, if enabled, the meta-review.

    Args:
        paper (Paper): The paper under debate.

        client: A chat client.

    Keyword Args:
        prompts (dict): Prompt templates. Default is
            :data:`reviewgraph.data.prompts`.

        meta_review (bool): Run the senior reviewer's meta-review. Default
            is True.

    Returns:
        Transcript

    Raises:
        ValueError: If the paper body is empty.
        EndpointError: If a turn keeps failing.
    """
    p = prompts or default_prompts
    if not paper.body or not paper.body.strip():
        raise ValueError("Paper '{}' has an empty body.".format(paper.paper_id))

    base = paper_turns(paper, p)
    refs = [dict(a) for a in paper.attachments]

    # Initial review
    review_prompts, reviews = {}, []
    for role in REVIEWERS:
        review_prompts[role] = _user(p['reviewer_role'].format(
            reviewer=role.display_name, guidelines=p['review_guidelines']))
        content = client.chat(base + [review_prompts[role]])
        reviews.append(Message(role, content, list(refs)))
    logger.info("Paper '%s': %d reviews written", paper.paper_id,
                len(reviews))

    # Author rebuttal
    rebuttal = client.chat(base + [_user(p['author_role'].format(
        guidelines=p['author_guidelines'],
        reviews=render_reviews(reviews)))])
    rebuttal = Message(AgentRole.AUTHOR, rebuttal)

    # Re-evaluation
    followups = []
    for review in reviews:
        content = client.chat(base + [
            review_prompts[review.role], _assistant(review.content),
            _user(p['reevaluation'].format(rebuttal=rebuttal.content))])
        followups.append(Message(review.role, content))

    stages = [StageRecord(Stage.INITIAL_REVIEW, reviews),
              StageRecord(Stage.AUTHOR_REBUTTAL, [rebuttal]),
              StageRecord(Stage.RE_EVALUATION, followups)]

    if meta_review:
        discussion = '\n\n'.join([
            render_reviews(reviews),
            'Author:\n{}'.format(rebuttal.content),
            render_reviews(followups)])
        content = client.chat(base + [_user(p['area_chair_role'].format(
            guidelines=p['area_chair_guidelines'], discussion=discussion))])
        stages.append(StageRecord(Stage.META_REVIEW, [
            Message(AgentRole.SENIOR_REVIEWER, content)]))

    logger.info("Paper '%s': debate finished with %d stages",
                paper.paper_id, len(stages))
    return Transcript(paper.paper_id, stages)
