import json

import numpy as np
import pytest

from .context import (AgentRole, RelationGroup, RelationType,
                      parse_triple_batch, parse_triple_string, read_data)
from reviewgraph.exceptions import (MalformedBatch, MalformedTriple,
                                    MissingArrayKey, NotJson,
                                    UnknownRelationLabel, WrongGroupSpeaker)
from reviewgraph.extraction.triples import render_triple_string


def case_rejected():
    return parse_triple_batch(read_data('triples_rejected.json'),
                              'rejected')


def test_case_rejected():
    batch = case_rejected()

    assert len(batch.reviewer_author) == 7
    assert len(batch.inter_reviewer) == 8
    assert not batch.malformed
    assert all(t.relation is RelationType.ACCEPT
               for t in batch.reviewer_author)
    assert [t.relation for t in batch.inter_reviewer].count(
        RelationType.AGREE) == 4
    assert batch.inter_reviewer[-1].relation is RelationType.INDEPENDENT


def case_accepted():
    return parse_triple_batch(read_data('triples_accepted.json'),
                              'accepted')


def test_case_accepted():
    batch = case_accepted()

    assert len(batch.reviewer_author) == 7
    assert len(batch.inter_reviewer) == 7
    assert [t.relation for t in batch.reviewer_author].count(
        RelationType.NEUTRAL) == 4
    assert batch.inter_reviewer[3].relation is RelationType.PROGRESSIVE


def test_apostrophes_and_commas():
    t = parse_triple_string(
        "(Reviewer 2: 'The paper's writing could be improved, overall.', "
        "Reviewer 3: 'It is well-written, organized.', Disagree)",
        RelationGroup.INTER_REVIEWER)

    assert t.speaker_a is AgentRole.REVIEWER2
    assert t.text_a == "The paper's writing could be improved, overall."
    assert t.speaker_b is AgentRole.REVIEWER3
    assert t.text_b == 'It is well-written, organized.'
    assert t.relation is RelationType.DISAGREE


def test_curly_quotes():
    t = parse_triple_string(
        '(Reviewer 1: “More baselines are needed.”, Author: '
        '“We will add them.”, accept)',
        RelationGroup.REVIEWER_AUTHOR)

    assert t.text_a == 'More baselines are needed.'
    assert t.text_b == 'We will add them.'
    assert t.relation is RelationType.ACCEPT


def test_wrong_group_speaker():
    with pytest.raises(WrongGroupSpeaker):
        parse_triple_string("(Reviewer 1: 'a', Reviewer 2: 'b', Accept)",
                            RelationGroup.REVIEWER_AUTHOR)


def test_missing_second_speaker():
    with pytest.raises(MalformedTriple):
        parse_triple_string("(Reviewer 1: 'x', 'y', Accept)",
                            RelationGroup.REVIEWER_AUTHOR)


@pytest.mark.parametrize('tail', ['.', ',', ' .', ').', ';'])
def test_trailing_punctuation(tail):
    s = "(Reviewer 3: 'Add error bars.', Author: 'Done.', Accept)"
    t = parse_triple_string(s.rstrip(')') + ')' + tail.lstrip(')'),
                            RelationGroup.REVIEWER_AUTHOR)

    assert t.text_b == 'Done.'
    assert t.relation is RelationType.ACCEPT


WORDS = ['the', "paper's", 'method', 'results,', 'baselines', 'authors',
         'clearly', 'novel;', 'weak', 'ablation', 'figure', 'well-written']
QUOTES = [("'", "'"), ('"', '"'), ('‘', '’'), ('“', '”'), ('`', '`'),
          ('', '')]


def sentence(rng):
    words = rng.choice(WORDS, size=int(rng.integers(1, 8)))
    return ' '.join(words).capitalize() + '.'


def triple_string(rng):
    """ A random reviewer-author element and its two sentences. """
    qa, qb = (QUOTES[int(i)] for i in rng.integers(len(QUOTES), size=2))
    a, b = sentence(rng), sentence(rng)
    label = ['Accept', 'reject', 'NEUTRAL', 'Agree', 'maybe'][
        int(rng.integers(5))]
    s = '({}: {}{}{}, Author: {}{}{}, {}){}'.format(
        'Reviewer {}'.format(int(rng.integers(1, 4))), qa[0], a, qa[1],
        qb[0], b, qb[1], label, ['', '.', ','][int(rng.integers(3))])
    return s, a, b


def test_quote_styles():
    rng = np.random.default_rng(12)
    for _ in range(500):
        s, a, b = triple_string(rng)
        t = parse_triple_string(s, RelationGroup.REVIEWER_AUTHOR)
        assert (t.text_a, t.text_b) == (a, b), s
        try:
            t.relation
        except UnknownRelationLabel:
            assert t.relation_label.lower() in ['agree', 'maybe']


def test_damaged_elements_raise_typed_errors():
    rng = np.random.default_rng(13)
    for _ in range(500):
        s, _, _ = triple_string(rng)
        cut = sorted(int(i) for i in rng.integers(len(s) + 1, size=2))
        damaged = s[:cut[0]] + s[cut[1]:]
        try:
            parse_triple_string(damaged, RelationGroup.REVIEWER_AUTHOR)\
                .relation
        except (MalformedTriple, WrongGroupSpeaker, UnknownRelationLabel):
            pass


def test_json_inside_prose():
    reply = ("Here are the relations you asked for:\n```json\n"
             + read_data('triples_rejected.json')
             + "\n```\nLet me know if you need more.")
    batch = parse_triple_batch(reply, 'rejected')

    assert len(batch.triplets) == 15


def test_render_round_trip():
    batch = case_rejected()
    again = parse_triple_batch(batch.to_json(), 'rejected')

    assert again.triplets == batch.triplets
    assert render_triple_string(batch.reviewer_author[0]).startswith(
        "(Reviewer 1: 'While the paper presents")


def test_malformed_elements_are_skipped():
    reply = json.dumps({
        'Reviewer_Author_Relations': [
            "(Reviewer 1: 'Needs baselines.', Author: 'Added.', Accept)",
            "(Reviewer 1: 'Needs ablations.', Author: 'Added.', Agree)",
        ],
        'Inter_Reviewer_Relations': [
            "(Reviewer 1: 'Needs baselines.', Reviewer 2: 'Agreed.', Agree)",
        ],
    })
    batch = parse_triple_batch(reply, 'p')

    assert len(batch.triplets) == 2
    assert len(batch.malformed) == 1
    assert 'Agree' in batch.malformed[0][0]


def test_mostly_malformed_batch():
    reply = json.dumps({
        'Reviewer_Author_Relations': ['garbage', 'more garbage'],
        'Inter_Reviewer_Relations': [
            "(Reviewer 1: 'a', Reviewer 2: 'b', Agree)"],
    })
    with pytest.raises(MalformedBatch):
        parse_triple_batch(reply, 'p')


def test_missing_array():
    with pytest.raises(MissingArrayKey):
        parse_triple_batch('{"Reviewer_Author_Relations": []}', 'p')


def test_not_json():
    with pytest.raises(NotJson):
        parse_triple_batch('I could not find any relations.', 'p')
