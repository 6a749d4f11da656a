import pytest

from .context import content_hash, dumps_graph, NodeType, validate_graph
from reviewgraph.agents import (EmbeddingCache, EndpointConfig, MockClient,
                                Paper, graph_texts, run_pipeline)
from reviewgraph.exceptions import EndpointError


def case_paper(paper_id='p1'):
    return Paper(paper_id, 'Graph transformers for citation networks',
                 'We adapt heterogeneous graph transformers to citation '
                 'networks and report node classification results on '
                 'four benchmarks.')


def case_a(**kwargs):
    client = MockClient(seed=11, embedding_dim=16)
    return client, run_pipeline(case_paper(), client, label='reject',
                                **kwargs)


def test_case_a():
    client, out = case_a()
    g = out['graph']

    assert validate_graph(g).ok
    assert g.label == 'reject'
    assert set(out) == {'transcript', 'triples', 'dimensions', 'graph',
                        'embeddings'}
    reviewer_nodes = [n for n in g.nodes
                      if n.node_type is NodeType.REVIEWER_OPINION]
    assert len(out['dimensions']) == len(reviewer_nodes)
    for text in graph_texts(g):
        assert content_hash(text) in out['embeddings']


def test_request_accounting():
    client, out = case_a()
    distinct = {content_hash(t) for t in graph_texts(out['graph'])}

    # 8 debate turns, 1 extraction and one classification per opinion
    assert client.request_counts['chat'] == 9 + len(out['dimensions'])
    assert client.calls['classification'] == len(out['dimensions'])
    assert client.request_counts['embed'] == len(distinct)


def test_graph_is_reproducible():
    _, a = case_a(jobs=1)
    _, b = case_a(jobs=4)
    _, c = case_a()

    assert dumps_graph(a['graph']) == dumps_graph(b['graph'])
    assert dumps_graph(a['graph']) == dumps_graph(c['graph'])


def test_cache_is_reused(tmp_path):
    path = str(tmp_path / 'cache.jsonl')
    case_a(cache=EmbeddingCache(path))

    client, out = case_a(cache=EmbeddingCache(path))
    assert client.request_counts['embed'] == 0
    assert len(out['embeddings']) > 0


def test_ablated_pipeline():
    _, out = case_a(ablation='no_title')
    assert all(n.node_type is not NodeType.TITLE for n in out['graph'].nodes)


def test_pipeline_checks():
    with pytest.raises(AttributeError):
        run_pipeline(case_paper(), MockClient(), seed=3)


def test_endpoint_outage():
    client = MockClient(fail_after=8,
                        config=EndpointConfig(max_retries=1,
                                              backoff_base=0))
    with pytest.raises(EndpointError) as err:
        run_pipeline(case_paper(), client)
    assert 'outage' in str(err.value)
    assert client.request_counts['chat'] == 10
