""" Provide the ``MockClient`` class, a deterministic offline stand-in for
the chat/embedding endpoint.

The mock reads the last user message of a conversation, recognizes which
pipeline step sent it, and answers from the sentence banks in
:mod:`reviewgraph.data`. Every choice is drawn from a generator seeded with
the client seed and a hash of the conversation, so equal seeds give equal
replies whatever the call order.

"""

# -- Imports -----------------------------------------------------------------
import hashlib
import json
import re
import threading
import time
from collections import Counter

import numpy as np

from reviewgraph import content_hash, normalize_text
from reviewgraph.agents.endpoint import BaseClient, EndpointConfig
from reviewgraph.data import (
    dimension_data, keyword_rule_order, mock_critiques, mock_followups,
    mock_responses, mock_strengths, reviewer_author_relations,
    inter_reviewer_relations)
from reviewgraph.exceptions import EndpointError
from reviewgraph.extraction.triples import (
    IRR_KEY, RAR_KEY, OpinionTriplet, render_triple_string)
from reviewgraph.graph.schema import AgentRole, Dimension, RelationGroup

DEFAULT_EMBEDDING_DIM = 64

# Prompt markers, tested in this order against the last user message
REQUEST_MARKERS = [
    ('classification', 'Comment to classify:'),
    ('extraction', '### Task:'),
    ('meta_review', 'area chair'),
    ('rebuttal', 'You are the author'),
    ('reevaluation', 're-express or refine'),
    ('review', 'reviewer'),
]

# Author stances after which a reviewer declares the concern resolved
_SATISFYING = {'accept', 'clarify', 'compromise', 'extend'}

_REVIEWER_HEADER = re.compile(r'^\s*Reviewer\s*(\d)\s*:?\s*$')
_REVIEWER_NAME = re.compile(r'You are Reviewer\s*(\d)')
_SECTION = re.compile(r'^###\s*(.+?):\s*$', re.MULTILINE)


# -- Deterministic helpers ---------------------------------------------------

def _hash_int(*parts):
    digest = hashlib.sha256('\x1f'.join(str(p) for p in parts)
                            .encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'little')


def _rng(seed, *parts):
    return np.random.default_rng([int(seed), _hash_int(*parts)])


def keyword_dimension(text, seed=0):
    """ The mock's keyword rule: the first dimension, in
    ``keyword_rule_order``, with a keyword inside the text. A text without
    any keyword gets a dimension drawn from its hash.

    Returns:
        Dimension
    """
    lowered = normalize_text(text).lower()
    for name in keyword_rule_order:
        if any(k in lowered for k in dimension_data[name]['keywords']):
            return Dimension(name)
    dims = list(Dimension)
    return dims[_hash_int(seed, 'dimension', normalize_text(text))
                % len(dims)]


def mock_stance(text, seed=0):
    """ Author stance the mock takes toward a reviewer sentence. """
    labels = list(reviewer_author_relations)
    return labels[_hash_int(seed, 'stance', normalize_text(text))
                  % len(labels)]


def _topic(text, seed):
    return keyword_dimension(text, seed).display_name.lower()


def argument_lines(text):
    """ Split a block of reviews into ``(reviewer number, sentence)`` pairs.
    A 'Reviewer N:' line opens a review; sentences are lines starting with
    '- '.

    """
    out, current = [], None
    for line in text.splitlines():
        header = _REVIEWER_HEADER.match(line)
        if header:
            current = int(header.group(1))
        elif line.strip().startswith('- ') and current is not None:
            out.append((current, normalize_text(line.strip()[2:])))
    return out


def _bullets(text):
    return [normalize_text(line.strip()[2:]) for line in text.splitlines()
            if line.strip().startswith('- ')]


def _sections(text):
    """ Map '### Title:' headers to the text under them. """
    marks = list(_SECTION.finditer(text))
    return {m.group(1).strip(): text[m.end():marks[i + 1].start()
                                     if i + 1 < len(marks) else len(text)]
            for i, m in enumerate(marks)}


# -- MockClient Class --------------------------------------------------------

class MockClient(BaseClient):
    """ Class to represent the offline mock endpoint. It never touches the
    network.

    Attributes:
        calls (Counter): Successful replies per request kind ('review',
            'rebuttal', 'reevaluation', 'meta_review', 'extraction',
            'classification', 'embedding').

        max_in_flight (int): Highest number of requests seen in progress at
            once.

    """

    def __init__(self, seed=0, **kwargs):
        """
        Args:
            seed (int): Seed of every canned choice.

        Keyword Args:
            config (EndpointConfig): Retry and concurrency settings. Default
                is an ``EndpointConfig`` with ``backoff_base=0``.

            embedding_dim (int): Length of the hashed embeddings. Default is
                64.

            fail_first (int): The first N attempts fail with a retryable
                ``EndpointError``.

            fail_after (int): Every attempt after the first N fails, as an
                endpoint that went down.

            latency (float): Seconds each request takes. Default is 0.

            replies (dict): Fixed replies per request kind, as a string or
                a callable taking the message list.

        """
        allowed_keys = ['config', 'embedding_dim', 'fail_first',
                        'fail_after', 'latency', 'replies']
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute.\nThe "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        config = kwargs.get('config') or EndpointConfig(backoff_base=0)
        super().__init__(config)
        self.seed = int(seed)
        self.embedding_dim = int(kwargs.get('embedding_dim',
                                            DEFAULT_EMBEDDING_DIM))
        self.fail_first = int(kwargs.get('fail_first', 0))
        self.fail_after = kwargs.get('fail_after', None)
        self.latency = float(kwargs.get('latency', 0.0))
        self.replies = dict(kwargs.get('replies') or {})
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be positive, not {}."
                             "".format(self.embedding_dim))

        self.calls = Counter()
        self.attempts = 0
        self.in_flight = 0
        self.max_in_flight = 0

    # -- Instrumentation -----------------------------------------------------

    def _begin(self):
        with self._lock:
            self.attempts += 1
            attempt = self.attempts
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            if self.latency:
                time.sleep(self.latency)
            if attempt <= self.fail_first:
                raise EndpointError("Injected failure on attempt {}."
                                    "".format(attempt))
            if self.fail_after is not None and attempt > self.fail_after:
                raise EndpointError("Injected outage after {} attempts."
                                    "".format(self.fail_after))
        except EndpointError:
            self._end()
            raise

    def _end(self):
        with self._lock:
            self.in_flight -= 1

    # -- Dispatch ------------------------------------------------------------

    @staticmethod
    def request_kind(messages):
        """ Name of the pipeline step that sent a conversation: the first
        marker found in the latest user message that holds one. Follow-up
        requests (JSON retries) thus keep the kind of the original request.

        """
        users = [m['content'] for m in reversed(messages)
                 if m['role'] == 'user']
        for content in users:
            for kind, marker in REQUEST_MARKERS:
                if marker in content:
                    return kind
        raise EndpointError("Mock cannot answer message {!r}."
                            "".format(users[0][:60] if users else ''),
                            retryable=False)

    def _send_chat(self, messages):
        self._begin()
        try:
            kind = self.request_kind(messages)
            fixed = self.replies.get(kind)
            if fixed is not None:
                reply = fixed(messages) if callable(fixed) else fixed
            else:
                reply = getattr(self, '_reply_' + kind)(messages)
            with self._lock:
                self.calls[kind] += 1
            return reply
        finally:
            self._end()

    def _send_embed(self, texts):
        self._begin()
        try:
            with self._lock:
                self.calls['embedding'] += 1
            return [self.embedding_vector(t) for t in texts]
        finally:
            self._end()

    def embedding_vector(self, text):
        """ Unit vector drawn from a generator seeded with the client seed
        and the content hash of the text.

        """
        v = _rng(self.seed, 'embedding', content_hash(text)) \
            .standard_normal(self.embedding_dim)
        return v / np.linalg.norm(v)

    # -- Canned replies ------------------------------------------------------

    @staticmethod
    def _context(messages):
        return '\n'.join(m['content'] for m in messages[:-1])

    @staticmethod
    def _reviewer_number(messages):
        for m in messages:
            found = _REVIEWER_NAME.search(m['content'])
            if found:
                return int(found.group(1))
        return 1

    def _reply_review(self, messages):
        n = self._reviewer_number(messages)
        rng = _rng(self.seed, 'review', n, self._context(messages))
        lines = [mock_strengths[rng.integers(len(mock_strengths))]]
        dims = rng.choice(keyword_rule_order, size=int(rng.integers(2, 4)),
                          replace=False)
        for name in dims:
            bank = mock_critiques[str(name)]
            lines.append(bank[rng.integers(len(bank))])
        rating = int(rng.integers(3, 9))
        return '\n'.join('- ' + s for s in lines) + \
            '\nOverall rating: {}'.format(rating)

    def _reply_rebuttal(self, messages):
        out = []
        for n, text in argument_lines(messages[-1]['content']):
            out.append(mock_responses[mock_stance(text, self.seed)].format(
                n=n, topic=_topic(text, self.seed)))
        return '\n'.join('- ' + s for s in out)

    def _reply_reevaluation(self, messages):
        own = next((m['content'] for m in messages
                    if m['role'] == 'assistant' and 'Overall rating' in
                    m['content']), '')
        out = []
        for text in _bullets(own):
            mood = 'satisfied' if mock_stance(text, self.seed) in \
                _SATISFYING else 'unsatisfied'
            out.append(mock_followups[mood].format(
                topic=_topic(text, self.seed)))
        return '\n'.join('- ' + s for s in out)

    def _reply_meta_review(self, messages):
        rng = _rng(self.seed, 'meta', self._context(messages),
                   messages[-1]['content'])
        return ('The reviewers and the author discussed the paper in detail.'
                '\nScore: {}'.format(int(rng.integers(3, 9))))

    def _reply_extraction(self, messages):
        transcript = next((m['content'] for m in messages
                           if '### Initial Review Comments:' in m['content']),
                          '')
        sections = _sections(transcript)
        initial = argument_lines(sections.get('Initial Review Comments', ''))
        responses = _bullets(sections.get("Author's Responses", ''))

        rar = []
        for (n, text), answer in zip(initial, responses):
            rar.append(OpinionTriplet(
                AgentRole('reviewer{}'.format(n)), text, AgentRole.AUTHOR,
                answer, mock_stance(text, self.seed).capitalize(),
                RelationGroup.REVIEWER_AUTHOR))

        irr, labels = [], list(inter_reviewer_relations)
        for i, (na, a) in enumerate(initial):
            for nb, b in initial[i + 1:]:
                if na >= nb or keyword_dimension(a, self.seed) is not \
                        keyword_dimension(b, self.seed):
                    continue
                label = labels[_hash_int(self.seed, 'irr', a, b)
                               % len(labels)]
                irr.append(OpinionTriplet(
                    AgentRole('reviewer{}'.format(na)), a,
                    AgentRole('reviewer{}'.format(nb)), b,
                    label.capitalize(), RelationGroup.INTER_REVIEWER))

        return json.dumps({RAR_KEY: [render_triple_string(t) for t in rar],
                           IRR_KEY: [render_triple_string(t) for t in irr]},
                          indent=1)

    def _reply_classification(self, messages):
        marker = 'Comment to classify:'
        request = next(m['content'] for m in reversed(messages)
                       if m['role'] == 'user' and marker in m['content'])
        comment = request.split(marker, 1)[1]
        dim = keyword_dimension(comment, self.seed)
        return json.dumps({'category': dim.display_name})


def mock_client(seed=0, **kwargs):
    """ Build a :class:`MockClient`. """
    return MockClient(seed, **kwargs)
