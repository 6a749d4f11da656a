""" Provide the seeded synthetic dataset generator.

Each synthetic paper is a debate graph built from random triplets through
the same builder as real papers. By default the decision depends only on
the reviewer-author edges (majority of Accept against Reject), and node
embeddings carry no label information, so a model can only recover the
label from the edge types.

"""

# -- Imports -----------------------------------------------------------------
import logging

import numpy as np

from reviewgraph.agents.embeddings import EmbeddingCache
from reviewgraph.extraction.builder import build_graph
from reviewgraph.extraction.dimensions import DimensionAssignment
from reviewgraph.extraction.triples import OpinionTriplet, TripleBatch
from reviewgraph.graph.schema import (
    AgentRole, Dimension, NodeType, RelationGroup, REVIEWERS)
from reviewgraph.model.hgt import node_embedding_matrix
from reviewgraph.data import inter_reviewer_relations, \
    reviewer_author_relations

logger = logging.getLogger(__name__)

DEFAULT_RAR_WEIGHTS = {'accept': 0.35, 'reject': 0.35, 'clarify': 0.075,
                       'compromise': 0.075, 'extend': 0.075,
                       'neutral': 0.075}
DEFAULT_IRR_WEIGHTS = {k: 1.0 for k in inter_reviewer_relations}


# -- Label rules -------------------------------------------------------------

def majority_rar_rule(batch):
    """ 'accept' if the batch has more Accept than Reject reviewer-author
    triplets, 'reject' if fewer, None on a tie.

    """
    labels = [t.relation_label.lower() for t in batch.reviewer_author]
    accept, reject = labels.count('accept'), labels.count('reject')
    if accept == reject:
        return None
    return 'accept' if accept > reject else 'reject'


def _weights(table, allowed):
    unknown = [k for k in table if k not in allowed]
    if unknown:
        raise ValueError("Unknown relation label(s) {}. Options are: {}"
                         "".format(unknown, list(allowed)))
    keys = list(table)
    w = np.asarray([table[k] for k in keys], dtype=float)
    if (w < 0).any() or w.sum() <= 0:
        raise ValueError("Relation weights must be non-negative and not all "
                         "zero: {}".format(table))
    return keys, w / w.sum()


# -- SyntheticGenerator Class ------------------------------------------------

class SyntheticGenerator(object):
    """ Class to represent a seeded generator of labeled debate graphs.

    """

    def __init__(self, **kwargs):
        """
        Keyword Args:
            seed (int): Seed of every random draw. Default is 0.

            embedding_dim (int): Width of the node embeddings. Default is 16.

            min_opinions (int): Fewest reviewer opinions per paper. Default
                is 4.

            max_opinions (int): Most reviewer opinions per paper. Default is
                12.

            response_rate (float): Chance that a reviewer opinion receives an
                author response. Default is 0.8.

            rar_weights (dict): Draw weights of the reviewer-author labels.

            irr_weights (dict): Draw weights of the inter-reviewer labels.

            label_rule (callable): Maps a ``TripleBatch`` to 'accept',
                'reject' or None (redraw). Default is
                :func:`majority_rar_rule`.

            noise (float): Scale of the per-node embedding noise around a
                shared offset. Default is 0.5.

            label_signal (float): Shift of the Title embedding along a fixed
                direction, signed by the label. Default is 0, no leak.

        """
        allowed_keys = ['seed', 'embedding_dim', 'min_opinions',
                        'max_opinions', 'response_rate', 'rar_weights',
                        'irr_weights', 'label_rule', 'noise', 'label_signal']
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute.\nThe "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        self.seed = int(kwargs.get('seed', 0))
        self.embedding_dim = int(kwargs.get('embedding_dim', 16))
        self.min_opinions = int(kwargs.get('min_opinions', 4))
        self.max_opinions = int(kwargs.get('max_opinions', 12))
        self.response_rate = float(kwargs.get('response_rate', 0.8))
        self.label_rule = kwargs.get('label_rule', majority_rar_rule)
        self.noise = float(kwargs.get('noise', 0.5))
        self.label_signal = float(kwargs.get('label_signal', 0.0))
        self._rar = _weights(kwargs.get('rar_weights', DEFAULT_RAR_WEIGHTS),
                             reviewer_author_relations)
        self._irr = _weights(kwargs.get('irr_weights', DEFAULT_IRR_WEIGHTS),
                             inter_reviewer_relations)

        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be positive.")
        if not 1 <= self.min_opinions <= self.max_opinions:
            raise ValueError("Need 1 <= min_opinions <= max_opinions, got {} "
                             "and {}.".format(self.min_opinions,
                                              self.max_opinions))
        if not 0 < self.response_rate <= 1:
            raise ValueError("response_rate must be in (0, 1], not {}."
                             "".format(self.response_rate))

        self.rng = np.random.default_rng(self.seed)
        self.offset = self.rng.standard_normal(self.embedding_dim)
        self.offset /= np.linalg.norm(self.offset)
        self.signal_dir = self.rng.standard_normal(self.embedding_dim)
        self.signal_dir /= np.linalg.norm(self.signal_dir)
        self.cache = EmbeddingCache()

    # -- Triplets ------------------------------------------------------------

    def _draw_batch(self, paper_id):
        rng = self.rng
        n = int(rng.integers(self.min_opinions, self.max_opinions + 1))
        speakers = [REVIEWERS[int(i)] for i in rng.integers(0, 3, size=n)]
        texts = ['{} opinion {} of {}'.format(paper_id, i,
                                               s.display_name.lower())
                 for i, s in enumerate(speakers)]

        batch = TripleBatch(paper_id)
        keys, p = self._rar
        for i, (s, t) in enumerate(zip(speakers, texts)):
            if rng.random() < self.response_rate:
                batch.reviewer_author.append(OpinionTriplet(
                    s, t, AgentRole.AUTHOR,
                    '{} response {} to {}'.format(paper_id, i,
                                                  s.display_name.lower()),
                    keys[int(rng.choice(len(keys), p=p))].capitalize(),
                    RelationGroup.REVIEWER_AUTHOR))

        keys, p = self._irr
        pairs = set()
        for _ in range(int(rng.integers(0, n + 1)) if n > 1 else 0):
            a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
            if speakers[a] is speakers[b]:
                continue
            a, b = min(a, b), max(a, b)
            if (a, b) in pairs:
                continue
            pairs.add((a, b))
            batch.inter_reviewer.append(OpinionTriplet(
                speakers[a], texts[a], speakers[b], texts[b],
                keys[int(rng.choice(len(keys), p=p))].capitalize(),
                RelationGroup.INTER_REVIEWER))

        dims = list(Dimension)
        assignments = [DimensionAssignment(s, t, dims[int(d)])
                       for s, t, d in zip(speakers, texts,
                                          rng.integers(0, 4, size=n))]
        return batch, assignments

    # -- Embeddings ----------------------------------------------------------

    def embeddings(self, g):
        """ N x d embedding matrix of a generated graph. New texts are added
        to ``self.cache``; texts seen before (the dimension names) reuse
        their vector.

        """
        for node in g.nodes:
            if node.text in self.cache:
                continue
            v = self.offset + self.noise * \
                self.rng.standard_normal(self.embedding_dim)
            v /= np.linalg.norm(v)
            if node.node_type is NodeType.TITLE and self.label_signal:
                sign = 1.0 if g.label == 'accept' else -1.0
                v = v + sign * self.label_signal * self.signal_dir
            self.cache.add(node.text, v)
        return node_embedding_matrix(g, self.cache)

    # -- Papers --------------------------------------------------------------

    def paper(self, paper_id):
        """ Generate one labeled paper. Draws that the label rule cannot
        decide are redrawn.

        Returns:
            tuple: ``(DebateGraph, ndarray)``.
        """
        while True:
            batch, dims = self._draw_batch(paper_id)
            label = self.label_rule(batch)
            if label is not None:
                break
        g = build_graph('Synthetic paper {}'.format(paper_id), batch, dims,
                        label=label)
        return g, self.embeddings(g)

    def dataset(self, n_train, n_val=0, n_test=0):
        """ Generate papers for the three splits.

        Returns:
            list: ``(split, DebateGraph, ndarray)`` triples, train first.
        """
        out = []
        for split, count in [('train', n_train), ('val', n_val),
                             ('test', n_test)]:
            for i in range(count):
                g, x = self.paper('synth-{}-{:04d}'.format(split, i))
                out.append((split, g, x))
        logger.info("Generated %d synthetic papers (%d/%d/%d)", len(out),
                    n_train, n_val, n_test)
        return out


def make_split(n, seed=0, **kwargs):
    """ ``n`` labeled ``(graph, embeddings)`` pairs, ready for training. """
    gen = SyntheticGenerator(seed=seed, **kwargs)
    return [(g, x) for _, g, x in gen.dataset(n)]


def random_debate_graph(seed=0, embedding_dim=4):
    """ A seeded 10-node graph touching every node type and both opinion
    relation groups: Title, four dimensions, three reviewer opinions (one
    per reviewer) and two author opinions.

    Returns:
        tuple: ``(DebateGraph, ndarray)`` with standard-normal embeddings.
    """
    rng = np.random.default_rng(seed)
    rar = list(reviewer_author_relations)
    irr = list(inter_reviewer_relations)
    reviews = [(r, 'Gradient check opinion of {}'.format(r.display_name))
               for r in REVIEWERS]
    answers = ['Gradient check response {}'.format(i) for i in range(2)]

    batch = TripleBatch('gradcheck-{}'.format(seed))
    for (speaker, text), answer in zip(reviews, answers + answers[:1]):
        batch.reviewer_author.append(OpinionTriplet(
            speaker, text, AgentRole.AUTHOR, answer,
            rar[int(rng.integers(len(rar)))],
            RelationGroup.REVIEWER_AUTHOR))
    for a, b in [(0, 1), (1, 2)]:
        batch.inter_reviewer.append(OpinionTriplet(
            reviews[a][0], reviews[a][1], reviews[b][0], reviews[b][1],
            irr[int(rng.integers(len(irr)))], RelationGroup.INTER_REVIEWER))

    dims = list(Dimension)
    assignments = [DimensionAssignment(s, t, dims[int(rng.integers(4))])
                   for s, t in reviews]
    label = 'accept' if rng.random() < 0.5 else 'reject'
    g = build_graph('Gradient check paper', batch, assignments, label=label)
    return g, rng.standard_normal((len(g.nodes), embedding_dim))
