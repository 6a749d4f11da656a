""" Provide the LLM-backed pipeline steps that follow the debate:
``extract_triples``, ``classify_dimensions`` and ``run_pipeline``.

"""

# -- Imports -----------------------------------------------------------------
import logging
from concurrent.futures import ThreadPoolExecutor

from reviewgraph.agents.debate import Stage, render_reviews, simulate_debate
from reviewgraph.agents.embeddings import EmbeddingCache, embed_texts
from reviewgraph.data import (
    dimension_data, inter_reviewer_relations, prompts as default_prompts,
    reviewer_author_relations)
from reviewgraph.exceptions import (
    ClassificationFailed, ExtractionFailed, NotJson, UnknownCategory)
from reviewgraph.extraction.builder import build_graph, reviewer_opinion_keys
from reviewgraph.extraction.dimensions import (
    DimensionAssignment, parse_dimension_reply)
from reviewgraph.extraction.triples import parse_triple_batch
from reviewgraph.graph.schema import Dimension

logger = logging.getLogger(__name__)


def _relation_list(table):
    return '\n'.join('- {}: {}'.format(k.capitalize(), v)
                     for k, v in table.items())


def _category_list():
    return '\n'.join('{}. {}: {}'.format(i, dimension_data[d.value]['name'],
                                         dimension_data[d.value]['question'])
                     for i, d in enumerate(Dimension, start=1))


# -- Triple extraction -------------------------------------------------------

def extraction_messages(transcript, prompts=None):
    """ The extraction conversation of a transcript. The meta-review is
    never shown to the extractor.

    """
    p = prompts or default_prompts
    rebuttal = '\n\n'.join(m.content for m in
                           transcript.messages(Stage.AUTHOR_REBUTTAL))
    slots = p['extraction_transcript'].format(
        initial=render_reviews(transcript.messages(Stage.INITIAL_REVIEW)),
        rebuttal=rebuttal,
        followup=render_reviews(transcript.messages(Stage.RE_EVALUATION)))
    task = p['extraction_task'].format(
        ra_relations=_relation_list(reviewer_author_relations),
        ir_relations=_relation_list(inter_reviewer_relations))
    return [{'role': 'system', 'content': p['extraction_system']},
            {'role': 'user', 'content': slots},
            {'role': 'assistant', 'content': p['extraction_ack']},
            {'role': 'user', 'content': task}]


def extract_triples(transcript, client, prompts=None):
    """ Function that asks the client for the opinion triplets of a debate.
    A reply without JSON is retried once, with a request for JSON only.

    Args:
        transcript (Transcript): The recorded debate.

        client: A chat client.

    Keyword Args:
        prompts (dict): Prompt templates.

    Returns:
        TripleBatch

    Raises:
        ExtractionFailed: If both replies hold no JSON.
        EndpointError: If a request keeps failing.
    """
    p = prompts or default_prompts
    messages = extraction_messages(transcript, p)
    reply = client.chat(messages)
    try:
        return parse_triple_batch(reply, transcript.paper_id)
    except NotJson as err:
        logger.warning("Extraction reply for '%s' holds no JSON (%s); "
                       "asking again", transcript.paper_id, err)

    messages = messages + [
        {'role': 'assistant', 'content': reply},
        {'role': 'user', 'content': p['extraction_json_retry']}]
    reply = client.chat(messages)
    try:
        return parse_triple_batch(reply, transcript.paper_id)
    except NotJson as err:
        raise ExtractionFailed("Extraction of '{}' failed twice: {}"
                               "".format(transcript.paper_id, err))


# -- Dimension classification ------------------------------------------------

def classification_messages(text, prompts=None):
    p = prompts or default_prompts
    return [{'role': 'system', 'content': p['classification_system'].format(
                categories=_category_list())},
            {'role': 'user',
             'content': p['classification_user'].format(comment=text)}]


def _classify_one(text, client, p):
    """ Dimension of one comment, or None after a failed retry. """
    messages = classification_messages(text, p)
    reply = client.chat(messages)
    try:
        return parse_dimension_reply(reply)
    except (NotJson, UnknownCategory) as err:
        logger.warning("Bad classification reply (%s); asking again", err)
    messages = messages + [
        {'role': 'assistant', 'content': reply},
        {'role': 'user', 'content': p['classification_retry']}]
    try:
        return parse_dimension_reply(client.chat(messages))
    except (NotJson, UnknownCategory):
        return None


def classify_dimensions(batch, client, prompts=None, jobs=None):
    """ Function that assigns an evaluation dimension to every distinct
    reviewer opinion of a batch, one request per opinion. Requests run in
    parallel; results keep the opinion order.

    Args:
        batch (TripleBatch): The parsed triplets.

        client: A chat client.

    Keyword Args:
        prompts (dict): Prompt templates.

        jobs (int): Parallel requests. Default is the client's
            ``max_concurrency``.

    Returns:
        list: :class:`DimensionAssignment` records, in node order.

    Raises:
        ClassificationFailed: Lists the comments still unclassified after
            their retry.
    """
    p = prompts or default_prompts
    keys = reviewer_opinion_keys(batch)
    if not keys:
        return []
    workers = jobs or client.config.max_concurrency
    with ThreadPoolExecutor(max_workers=workers) as pool:
        dims = list(pool.map(lambda k: _classify_one(k[1], client, p), keys))

    failed = ['{}: {}'.format(s.display_name, t)
              for (s, t), d in zip(keys, dims) if d is None]
    if failed:
        raise ClassificationFailed(failed)
    return [DimensionAssignment(s, t, d) for (s, t), d in zip(keys, dims)]


# -- Full pipeline -----------------------------------------------------------

def graph_texts(g):
    """ Node texts of a graph, in node order. """
    return [n.text for n in g.nodes]


def run_pipeline(paper, client, **kwargs):
    """ Function that runs simulate, extract, classify, build and embed for
    one paper.

    Args:
        paper (Paper): The paper under debate.

        client: A chat/embedding client.

    Keyword Args:
        label (str): Decision attached to the graph.

        ablation (AblationMode or str): Ablation of the built graph.

        cache (EmbeddingCache): Embedding cache. Default is a fresh one.

        jobs (int): Parallel classification and embedding requests.

    Returns:
        dict: ``transcript``, ``triples``, ``dimensions``, ``graph`` and
        ``embeddings`` (an :class:`EmbeddingCache` holding the graph's
        texts).
    """
    allowed_keys = ['label', 'ablation', 'cache', 'jobs']
    for key in kwargs:
        if key not in allowed_keys:
            raise AttributeError("'{}' is not a valid attribute.\nThe "
                                 "allowed attributes are: {}"
                                 "".format(key, allowed_keys))
    cache = kwargs.get('cache')
    cache = cache if cache is not None else EmbeddingCache()
    jobs = kwargs.get('jobs')

    transcript = simulate_debate(paper, client)
    batch = extract_triples(transcript, client)
    dims = classify_dimensions(batch, client, jobs=jobs)
    g = build_graph(paper.title, batch, dims, label=kwargs.get('label'),
                    ablation=kwargs.get('ablation', 'full'))
    texts = graph_texts(g)
    embed_texts(texts, client, cache=cache, jobs=jobs)
    return {'transcript': transcript, 'triples': batch, 'dimensions': dims,
            'graph': g, 'embeddings': cache.subset(texts)}
