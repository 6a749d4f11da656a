""" Provide the ``EmbeddingCache`` class and ``embed_texts``.

Cache and per-paper embedding files share one record format, one JSON object
per line::

    {"sha256": "<content hash>", "dim": 64, "vector": [...]}

"""

# -- Imports -----------------------------------------------------------------
import json
import logging
import os
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from reviewgraph import content_hash
from reviewgraph.exceptions import InconsistentDimension, NotJson

logger = logging.getLogger(__name__)


# -- EmbeddingCache Class ----------------------------------------------------

class EmbeddingCache(Mapping):
    """ Class to represent embeddings keyed by content hash. Lookups accept
    either a hash or the text itself. All vectors share one dimension.

    """

    def __init__(self, path=None):
        """
        Keyword Args:
            path (str): JSON-lines file backing the cache. Records are read
                when the file exists and appended by :meth:`add`. Default is
                ``None``, an in-memory cache.

        """
        self.path = path
        self._vectors = {}
        self.dim = None
        if path is not None and os.path.exists(path):
            for digest, vector in read_records(path):
                self._put(digest, vector)

    def _put(self, digest, vector):
        vector = np.asarray(vector, dtype=float).ravel()
        if self.dim is None:
            self.dim = len(vector)
        elif len(vector) != self.dim:
            raise InconsistentDimension(
                "Embedding of dimension {} does not fit a cache of dimension "
                "{}.".format(len(vector), self.dim))
        self._vectors[digest] = vector

    def add(self, text, vector):
        """ Store the vector of a text, and append it to the backing file.
        """
        digest = content_hash(text)
        if digest in self._vectors:
            return
        self._put(digest, vector)
        if self.path is not None:
            with open(self.path, 'a', encoding='utf-8') as f:
                f.write(_record(digest, self._vectors[digest]))

    def _key(self, key):
        if isinstance(key, str) and len(key) == 64 and key in self._vectors:
            return key
        return content_hash(key)

    def __getitem__(self, key):
        return self._vectors[self._key(key)]

    def __contains__(self, key):
        return self._key(key) in self._vectors

    def __iter__(self):
        return iter(self._vectors)

    def __len__(self):
        return len(self._vectors)

    def subset(self, texts):
        """ A new in-memory cache holding only the given texts. """
        out = EmbeddingCache()
        for t in texts:
            out._put(content_hash(t), self[t])
        return out

    def save(self, path):
        """ Write the whole cache, sorted by hash. """
        with open(path, 'w', encoding='utf-8') as f:
            for digest in sorted(self._vectors):
                f.write(_record(digest, self._vectors[digest]))


def _record(digest, vector):
    return json.dumps({'sha256': digest, 'dim': int(len(vector)),
                       'vector': [float(x) for x in vector]}) + '\n'


def read_records(path):
    """ Yield ``(sha256, vector)`` pairs of an embedding file.

    Raises:
        NotJson: On an undecodable line.
        InconsistentDimension: If a record's vector length differs from its
            ``dim`` field.
    """
    with open(path, 'r', encoding='utf-8') as f:
        for n, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                digest, dim, vector = d['sha256'], d['dim'], d['vector']
            except (ValueError, KeyError, TypeError) as err:
                raise NotJson("{}:{}: bad embedding record ({})"
                              "".format(path, n, err))
            if len(vector) != dim:
                raise InconsistentDimension(
                    "{}:{}: record says dim {}, vector has {} values."
                    "".format(path, n, dim, len(vector)))
            yield digest, vector


def load_embeddings(path):
    return EmbeddingCache(path)


# -- embed_texts -------------------------------------------------------------

def embed_texts(texts, client, cache=None, jobs=None):
    """ Function that embeds texts through a client, one request per text
    missing from the cache. Repeated texts are requested once.

    Args:
        texts (list): Strings to embed.

        client: A chat/embedding client.

    Keyword Args:
        cache (EmbeddingCache): Cache consulted and filled. Default is a
            fresh in-memory cache.

        jobs (int): Parallel requests. Default is the client's
            ``max_concurrency``.

    Returns:
        list: One vector per input text, in input order.

    Raises:
        ValueError: If ``texts`` is empty.
        EndpointError: If a request keeps failing.
        InconsistentDimension: If the vectors differ in length.
    """
    texts = list(texts)
    if not texts:
        raise ValueError("Nothing to embed.")
    cache = cache if cache is not None else EmbeddingCache()

    missing, seen = [], set()
    for t in texts:
        digest = content_hash(t)
        if digest not in cache and digest not in seen:
            seen.add(digest)
            missing.append(t)
    logger.info("Embedding %d text(s): %d cached, %d to request",
                len(texts), len(texts) - len(missing), len(missing))

    if missing:
        workers = jobs or client.config.max_concurrency
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vectors = list(pool.map(lambda t: client.embed([t])[0], missing))
        for t, v in zip(missing, vectors):
            cache.add(t, v)

    return [cache[t] for t in texts]
