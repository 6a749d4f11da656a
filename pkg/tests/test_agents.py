import json

import httpx
import numpy as np
import pytest

from .context import parse_triple_batch, read_data
from reviewgraph.agents import (BaseClient, EmbeddingCache, EndpointConfig,
                                HttpChatClient, MockClient, Paper, Stage,
                                Transcript, classify_dimensions, embed_texts,
                                extract_triples, keyword_dimension,
                                load_transcript, save_transcript,
                                simulate_debate)
from reviewgraph.agents.debate import StageRecord
from reviewgraph.exceptions import (ClassificationFailed, EmptyCompletion,
                                    EndpointError, ExtractionFailed,
                                    InconsistentDimension)


def case_paper():
    return Paper('p1', 'Sparse attention for long documents',
                 'We propose a sparse attention pattern for transformers and '
                 'evaluate it on three summarization datasets.',
                 [{'kind': 'figure', 'url': 'https://example.org/fig1.png',
                   'description': 'Accuracy against sequence length.'},
                  {'kind': 'table', 'description': 'Results on the test '
                                                   'sets.'}])


def rejected_batch():
    return parse_triple_batch(read_data('triples_rejected.json'), 'p')


# -- Debate ------------------------------------------------------------------

def test_debate_stages():
    client = MockClient(seed=0)
    t = simulate_debate(case_paper(), client)

    assert [s.stage for s in t.stages] == [Stage.INITIAL_REVIEW,
                                           Stage.AUTHOR_REBUTTAL,
                                           Stage.RE_EVALUATION,
                                           Stage.META_REVIEW]
    reviews = t.messages(Stage.INITIAL_REVIEW)
    assert [m.role.value for m in reviews] == ['reviewer1', 'reviewer2',
                                               'reviewer3']
    assert all(len(m.attachments) == 2 for m in reviews)
    assert all('Overall rating:' in m.content for m in reviews)
    assert 'Score:' in t.messages(Stage.META_REVIEW)[0].content
    assert client.calls == {'review': 3, 'rebuttal': 1, 'reevaluation': 3,
                            'meta_review': 1}


def test_rebuttal_answers_every_argument():
    t = simulate_debate(case_paper(), MockClient(seed=2))
    arguments = sum(m.content.count('\n- ') + 1
                    for m in t.messages(Stage.INITIAL_REVIEW))
    rebuttal = t.messages(Stage.AUTHOR_REBUTTAL)[0].content

    assert len(rebuttal.splitlines()) == arguments


def test_debate_without_meta_review():
    client = MockClient(seed=0)
    t = simulate_debate(case_paper(), client, meta_review=False)

    assert len(t.stages) == 3
    assert client.request_counts['chat'] == 7


def test_mock_is_deterministic(tmp_path):
    a = simulate_debate(case_paper(), MockClient(seed=4))
    b = simulate_debate(case_paper(), MockClient(seed=4))
    c = simulate_debate(case_paper(), MockClient(seed=5))

    assert a == b
    assert a != c

    path = str(tmp_path / 'p1.json')
    save_transcript(a, path)
    assert load_transcript(path) == a


def test_transcript_checks():
    t = simulate_debate(case_paper(), MockClient(seed=0), meta_review=False)
    with pytest.raises(ValueError):
        Transcript('p1', [t.stages[1], t.stages[0], t.stages[2]])
    with pytest.raises(ValueError):
        Transcript('p1', [StageRecord(Stage.INITIAL_REVIEW,
                                      t.stages[0].messages[:2]),
                          t.stages[1], t.stages[2]])


def test_empty_paper():
    with pytest.raises(ValueError):
        simulate_debate(Paper('p2', 'Title', '  '), MockClient())


# -- Retries and concurrency -------------------------------------------------

def test_retry_delays_increase():
    client = MockClient(seed=0, fail_first=3,
                        config=EndpointConfig(backoff_base=0.01))
    reply = simulate_debate(case_paper(), client)

    assert reply.paper_id == 'p1'
    np.testing.assert_allclose(client.retry_delays, [0.01, 0.02, 0.04])
    assert client.attempts == 8 + 3


def test_retries_exhausted():
    client = MockClient(fail_first=10,
                        config=EndpointConfig(max_retries=2, backoff_base=0))
    with pytest.raises(EndpointError):
        simulate_debate(case_paper(), client)
    assert client.attempts == 3


class RefusingClient(BaseClient):

    def __init__(self):
        super().__init__(EndpointConfig(backoff_base=0))
        self.attempts = 0

    def _send_chat(self, messages):
        self.attempts += 1
        raise EndpointError('Bad credentials.', retryable=False)


def test_non_retryable_error():
    client = RefusingClient()
    with pytest.raises(EndpointError):
        client.chat([{'role': 'user', 'content': 'hello'}])
    assert client.attempts == 1
    assert client.retry_delays == []


def test_empty_completion():
    client = MockClient(replies={'review': '   '},
                        config=EndpointConfig(max_retries=1, backoff_base=0))
    with pytest.raises(EmptyCompletion):
        simulate_debate(case_paper(), client)
    assert client.request_counts['chat'] == 2


def test_concurrency_cap():
    client = MockClient(latency=0.02,
                        config=EndpointConfig(max_concurrency=2,
                                              backoff_base=0))
    texts = ['opinion number {}'.format(i) for i in range(10)]
    embed_texts(texts, client, jobs=8)

    assert client.calls['embedding'] == 10
    assert client.max_in_flight <= 2


def test_endpoint_config_checks():
    with pytest.raises(ValueError):
        EndpointConfig(max_concurrency=0)
    with pytest.raises(ValueError):
        EndpointConfig(max_retries=-1)
    with pytest.raises(AttributeError):
        EndpointConfig(api_key='secret')


def test_missing_api_key(monkeypatch):
    monkeypatch.delenv('REVIEWGRAPH_API_KEY', raising=False)
    with pytest.raises(EndpointError) as err:
        HttpChatClient(EndpointConfig())
    assert not err.value.retryable


# -- HTTP client -------------------------------------------------------------

def http_client(monkeypatch, handler, **kwargs):
    monkeypatch.setenv('REVIEWGRAPH_API_KEY', 'test-key')
    config = EndpointConfig(base_url='https://llm.example.org/v1',
                            backoff_base=0, **kwargs)
    client = HttpChatClient(config)
    client.http = httpx.Client(base_url=config.base_url,
                               headers=dict(client.http.headers),
                               transport=httpx.MockTransport(handler))
    return client


def test_http_chat(monkeypatch):
    seen = []

    def handler(request):
        seen.append(request)
        if len(seen) == 1:
            return httpx.Response(429, text='slow down')
        return httpx.Response(200, json={
            'choices': [{'message': {'content': 'A fine paper.'}}]})

    client = http_client(monkeypatch, handler, temperature=0.2)
    messages = [{'role': 'user', 'content': 'Figure 1: loss curve',
                 'attachments': [{'kind': 'figure',
                                  'url': 'https://example.org/f.png'}]}]

    assert client.chat(messages) == 'A fine paper.'
    assert len(seen) == 2
    assert seen[1].url.path == '/v1/chat/completions'
    assert seen[1].headers['Authorization'] == 'Bearer test-key'
    body = json.loads(seen[1].content)
    assert body['temperature'] == 0.2
    assert body['messages'][0]['content'][1]['type'] == 'image_url'


def test_http_client_error_is_not_retried(monkeypatch):
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(401, text='unauthorized')

    client = http_client(monkeypatch, handler)
    with pytest.raises(EndpointError):
        client.chat([{'role': 'user', 'content': 'hello'}])
    assert len(calls) == 1


def test_http_embeddings(monkeypatch):
    def handler(request):
        texts = json.loads(request.content)['input']
        rows = [{'index': i, 'embedding': [float(i), 1.0]}
                for i in range(len(texts))]
        return httpx.Response(200, json={'data': rows[::-1]})

    client = http_client(monkeypatch, handler)
    vectors = client.embed(['a', 'b', 'c'])

    np.testing.assert_array_equal(vectors[2], [2.0, 1.0])


# -- Embeddings --------------------------------------------------------------

def test_embedding_cache_file(tmp_path):
    path = str(tmp_path / 'cache.jsonl')
    texts = ['The method is novel.', 'The writing is clear.',
             'The method is novel.']

    first = MockClient(seed=1, embedding_dim=8)
    vectors = embed_texts(texts, first, cache=EmbeddingCache(path))
    assert first.calls['embedding'] == 2
    np.testing.assert_array_equal(vectors[0], vectors[2])

    second = MockClient(seed=1, embedding_dim=8)
    again = embed_texts(texts, second, cache=EmbeddingCache(path))
    assert second.total_requests == 0
    np.testing.assert_allclose(again[1], vectors[1])


def test_embedding_cache_lookup():
    cache = EmbeddingCache()
    cache.add('  The  method is novel. ', [1.0, 0.0])

    assert 'The method is novel.' in cache
    np.testing.assert_array_equal(cache['The method is novel.'], [1.0, 0.0])
    with pytest.raises(InconsistentDimension):
        cache.add('Another text.', [1.0, 0.0, 0.0])


def test_embed_nothing():
    with pytest.raises(ValueError):
        embed_texts([], MockClient())


# -- Extraction and classification -------------------------------------------

def test_extraction_from_mock_debate():
    client = MockClient(seed=3)
    t = simulate_debate(case_paper(), client)
    batch = extract_triples(t, client)

    assert batch.reviewer_author
    assert not batch.malformed
    assert client.calls['extraction'] == 1


def test_extraction_retry():
    replies = []

    def extraction(messages):
        replies.append(messages[-1]['content'])
        if len(replies) == 1:
            return 'I found several relations in the discussion.'
        return read_data('triples_rejected.json')

    client = MockClient(replies={'extraction': extraction})
    t = simulate_debate(case_paper(), client, meta_review=False)
    batch = extract_triples(t, client)

    assert len(batch.triplets) == 15
    assert 'JSON object only' in replies[1]


def test_extraction_failed():
    client = MockClient(replies={'extraction': 'No relations, sorry.'})
    t = simulate_debate(case_paper(), client, meta_review=False)
    with pytest.raises(ExtractionFailed):
        extract_triples(t, client)
    assert client.calls['extraction'] == 2


def test_classification():
    batch = rejected_batch()
    client = MockClient(seed=0)
    dims = classify_dimensions(batch, client, jobs=3)

    assert client.calls['classification'] == 14
    assert [d.dimension for d in dims] == [keyword_dimension(d.text)
                                           for d in dims]


def test_classification_retry():
    def classification(messages):
        if messages[-1]['role'] == 'user' and \
                'Comment to classify:' in messages[-1]['content']:
            return 'It is about the experiments.'
        return '{"category": "Experimental Completeness"}'

    client = MockClient(replies={'classification': classification})
    dims = classify_dimensions(rejected_batch(), client)

    assert client.calls['classification'] == 28
    assert {d.dimension.value for d in dims} == {'experimental_completeness'}


def test_classification_failed():
    client = MockClient(replies={'classification': '{"category": "Ethics"}'})
    with pytest.raises(ClassificationFailed) as err:
        classify_dimensions(rejected_batch(), client)
    assert len(err.value.comments) == 14
    assert err.value.comments[0].startswith('Reviewer 1: While the paper')
