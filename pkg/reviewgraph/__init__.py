import hashlib
import logging

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())


# -- Helper functions for opinion texts -------------------------------------

def normalize_text(text):
    """ A helper function that collapses runs of whitespace and strips the
    ends of a sentence. Two opinions are the same node iff their speakers
    match and their normalized texts match exactly.

    Args:
        text (str): The raw sentence, as quoted by the extractor.

    Returns:
        str: The normalized sentence.

    """
    return ' '.join(str(text).split())


def content_hash(text):
    """ A helper function that returns the SHA-256 hex digest of a normalized
    text. It keys the embedding cache and maps graph nodes to embedding rows.

    Args:
        text (str): Any text.

    Returns:
        str: 64 hexadecimal characters.

    """
    return hashlib.sha256(normalize_text(text).encode('utf-8')).hexdigest()
