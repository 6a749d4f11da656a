""" Provide the ``EndpointConfig`` class and the chat/embedding clients.

Every client exposes the same two calls:

* ``chat(messages)``: a list of ``{'role', 'content', 'attachments'}``
  messages in, the completion text out.
* ``embed(texts)``: a list of strings in, one vector per string out.

Retries, exponential backoff and the concurrency cap live in
:class:`BaseClient`, so the offline mock goes through the same code paths as
the HTTP client.

"""

# -- Imports -----------------------------------------------------------------
import json
import logging
import os
import threading
from collections import Counter

import backoff
import httpx
import numpy as np

from reviewgraph.exceptions import EmptyCompletion, EndpointError

logger = logging.getLogger(__name__)

# Status codes worth another attempt
RETRY_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}


# -- EndpointConfig Class ----------------------------------------------------

class EndpointConfig(object):
    """ Class to represent the settings of a chat/embedding endpoint. The API
    key itself is never stored; only the name of the environment variable
    that holds it.

    """

    _defaults = {
        'base_url': 'https://api.openai.com/v1',
        'model': 'gpt-4o',
        'embedding_model': 'text-embedding-3-small',
        'api_key_env': 'REVIEWGRAPH_API_KEY',
        'chat_path': '/chat/completions',
        'embedding_path': '/embeddings',
        'auth_header': 'Authorization',
        'auth_scheme': 'Bearer',
        'max_concurrency': 4,
        'timeout': 120.0,
        'max_retries': 3,
        'backoff_base': 1.0,
        'temperature': None,
        'max_tokens': None,
    }

    def __init__(self, **kwargs):
        """
        Keyword Args:
            base_url (str): Root URL of the provider's API.

            model (str): Chat model name.

            embedding_model (str): Embedding model name.

            api_key_env (str): Environment variable holding the API key.
                Default is 'REVIEWGRAPH_API_KEY'.

            chat_path (str): Path of the chat-completion route.

            embedding_path (str): Path of the embedding route.

            auth_header (str): Header that carries the key.

            auth_scheme (str): Prefix of the key in the header; '' sends
                the bare key.

            max_concurrency (int): Requests in flight at once, >= 1.

            timeout (float): Seconds per request, > 0.

            max_retries (int): Retries after the first attempt, >= 0.

            backoff_base (float): First retry delay in seconds; the delay
                doubles with every retry.

            temperature (float): Sampling temperature. Not sent when None.

            max_tokens (int): Completion length cap. Not sent when None.

        """
        allowed_keys = list(self._defaults)
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute.\nThe "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        for key, default in self._defaults.items():
            setattr(self, key, kwargs.get(key, default))

        if int(self.max_concurrency) < 1:
            raise ValueError("max_concurrency must be at least 1, not {}."
                             "".format(self.max_concurrency))
        if int(self.max_retries) < 0:
            raise ValueError("max_retries must be zero or more, not {}."
                             "".format(self.max_retries))
        if float(self.timeout) <= 0:
            raise ValueError("timeout must be positive, not {}."
                             "".format(self.timeout))
        if float(self.backoff_base) < 0:
            raise ValueError("backoff_base must be zero or more, not {}."
                             "".format(self.backoff_base))
        self.max_concurrency = int(self.max_concurrency)
        self.max_retries = int(self.max_retries)

    def to_dict(self):
        return {key: getattr(self, key) for key in self._defaults}

    def replace(self, **kwargs):
        d = self.to_dict()
        d.update(kwargs)
        return EndpointConfig(**d)

    def api_key(self):
        """ Read the API key from the environment.

        Raises:
            EndpointError: If the variable is unset or empty.
        """
        key = os.environ.get(self.api_key_env, '')
        if not key:
            raise EndpointError("The API key variable '{}' is not set."
                                "".format(self.api_key_env), retryable=False)
        return key

    def __eq__(self, other):
        return isinstance(other, EndpointConfig) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'EndpointConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in self.to_dict().items()))


# -- BaseClient Class --------------------------------------------------------

class BaseClient(object):
    """ Class holding the request plumbing shared by every client. Subclasses
    implement ``_send_chat`` and ``_send_embed``, which run one attempt each.

    Attributes:
        request_counts (Counter): Attempts issued, per kind ('chat',
            'embed').

        retry_delays (list): Every backoff delay waited, in seconds.

    """

    def __init__(self, config=None):
        self.config = config if config is not None else EndpointConfig()
        self._slots = threading.BoundedSemaphore(self.config.max_concurrency)
        self._lock = threading.Lock()
        self.request_counts = Counter()
        self.retry_delays = []

    @property
    def total_requests(self):
        return sum(self.request_counts.values())

    # -- Public calls --------------------------------------------------------

    def chat(self, messages):
        """ Send one conversation and return the completion text.

        Raises:
            EndpointError: After the retries are exhausted.
            EmptyCompletion: If the completion stays empty.
        """
        return self._with_retries(self._chat_once, messages)

    def embed(self, texts):
        """ Embed a list of texts in one request.

        Returns:
            list: One 1-D float array per text.
        """
        texts = list(texts)
        if not texts:
            return []
        vectors = self._with_retries(self._embed_once, texts)
        if len(vectors) != len(texts):
            raise EndpointError("Asked for {} embeddings, received {}."
                                "".format(len(texts), len(vectors)))
        return [np.asarray(v, dtype=float) for v in vectors]

    # -- Retry plumbing ------------------------------------------------------

    def _with_retries(self, fn, payload):
        call = backoff.on_exception(
            backoff.expo, EndpointError,
            max_tries=self.config.max_retries + 1,
            giveup=lambda err: not getattr(err, 'retryable', True),
            on_backoff=self._on_backoff,
            jitter=None,
            factor=self.config.backoff_base)(fn)
        return call(payload)

    def _on_backoff(self, details):
        with self._lock:
            self.retry_delays.append(details['wait'])
        logger.warning("Endpoint request failed (attempt %d): %s. Retrying "
                       "in %.3fs", details['tries'], details.get('exception'),
                       details['wait'])

    def _chat_once(self, messages):
        with self._slots:
            with self._lock:
                self.request_counts['chat'] += 1
            text = self._send_chat(messages)
        if text is None or not str(text).strip():
            raise EmptyCompletion("The endpoint returned an empty "
                                  "completion.")
        return text

    def _embed_once(self, texts):
        with self._slots:
            with self._lock:
                self.request_counts['embed'] += 1
            return self._send_embed(texts)

    def _send_chat(self, messages):
        raise NotImplementedError

    def _send_embed(self, texts):
        raise NotImplementedError

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# -- HttpChatClient Class ----------------------------------------------------

class HttpChatClient(BaseClient):
    """ Client for any provider that speaks the chat-completion JSON protocol
    over HTTPS (role-tagged message lists in, ``choices[0].message.content``
    out). Figure attachments with a URL are sent as image parts; every other
    attachment is sent as text.

    """

    def __init__(self, config=None):
        super().__init__(config)
        scheme = self.config.auth_scheme
        key = self.config.api_key()
        headers = {self.config.auth_header:
                   '{} {}'.format(scheme, key) if scheme else key}
        self.http = httpx.Client(base_url=self.config.base_url.rstrip('/'),
                                 timeout=self.config.timeout, headers=headers)

    def close(self):
        self.http.close()

    @staticmethod
    def _content(message):
        attachments = message.get('attachments') or []
        if not attachments:
            return message['content']
        parts = [{'type': 'text', 'text': message['content']}]
        for a in attachments:
            if a.get('kind') == 'figure' and a.get('url'):
                parts.append({'type': 'image_url',
                              'image_url': {'url': a['url']}})
            else:
                parts.append({'type': 'text',
                              'text': a.get('description') or a.get('url', '')})
        return parts

    def _post(self, path, body):
        try:
            resp = self.http.post(path, json=body)
        except httpx.HTTPError as err:
            raise EndpointError("Request to {} failed: {}".format(path, err))
        if resp.status_code >= 400:
            raise EndpointError("{} answered HTTP {}: {}".format(
                path, resp.status_code, resp.text[:200]),
                retryable=resp.status_code in RETRY_STATUS)
        try:
            return resp.json()
        except json.JSONDecodeError as err:
            raise EndpointError("{} returned a non-JSON body: {}"
                                "".format(path, err))

    def _send_chat(self, messages):
        body = {'model': self.config.model,
                'messages': [{'role': m['role'], 'content': self._content(m)}
                             for m in messages]}
        if self.config.temperature is not None:
            body['temperature'] = self.config.temperature
        if self.config.max_tokens is not None:
            body['max_tokens'] = self.config.max_tokens
        data = self._post(self.config.chat_path, body)
        try:
            return data['choices'][0]['message']['content']
        except (KeyError, IndexError, TypeError):
            raise EmptyCompletion("Completion body has no message content.")

    def _send_embed(self, texts):
        data = self._post(self.config.embedding_path,
                          {'model': self.config.embedding_model,
                           'input': texts})
        try:
            rows = sorted(data['data'], key=lambda r: r['index'])
            return [r['embedding'] for r in rows]
        except (KeyError, TypeError) as err:
            raise EndpointError("Embedding body is malformed: {}"
                                "".format(err))


def load_endpoint_config(path):
    """ Read an endpoint config file (JSON with the EndpointConfig fields).
    """
    with open(path, 'r', encoding='utf-8') as f:
        return EndpointConfig(**json.load(f))
