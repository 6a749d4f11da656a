""" Provide the ``DatasetManifest`` class: the list of papers of a dataset,
their split, their decision and the paths of their stage artifacts.

A manifest file is JSON lines, one record per paper::

    {"paper_id": "p1", "split": "train", "label": "accept",
     "paths": {"paper": "papers/p1.json", "graph": "graphs/p1.json"}}

Relative paths are resolved against the manifest's directory.

"""

# -- Imports -----------------------------------------------------------------
import json
import os
from dataclasses import dataclass, field
from typing import Dict, Optional

import pandas as pd
from tabulate import tabulate

from reviewgraph.exceptions import EmptySplit, NotJson

SPLITS = ['train', 'val', 'test']
LABELS = ['accept', 'reject']
PATH_KEYS = ['paper', 'transcript', 'triples', 'dimensions', 'graph',
             'embeddings']


# -- ManifestRecord ----------------------------------------------------------

@dataclass
class ManifestRecord(object):
    paper_id: str
    split: str
    label: str
    paths: Dict[str, str] = field(default_factory=dict)
    title: Optional[str] = None

    def to_dict(self):
        d = {'paper_id': self.paper_id, 'split': self.split,
             'label': self.label, 'paths': dict(self.paths)}
        if self.title is not None:
            d['title'] = self.title
        return d


# -- DatasetManifest Class ---------------------------------------------------

class DatasetManifest(object):
    """ Class to represent a dataset manifest.

    """

    def __init__(self, records, root='.'):
        """
        Args:
            records (list): :class:`ManifestRecord` entries.

        Keyword Args:
            root (str): Directory relative paths are resolved against.

        Raises:
            ValueError: On a duplicate paper id, an unknown split, a missing
                or unknown label, or an unknown path key.
        """
        self.records = list(records)
        self.root = root

        seen = set()
        for r in self.records:
            if r.paper_id in seen:
                raise ValueError("Paper id '{}' appears twice in the "
                                 "manifest.".format(r.paper_id))
            seen.add(r.paper_id)
            if r.split not in SPLITS:
                raise ValueError("Paper '{}' has split '{}'. Options are: {}"
                                 "".format(r.paper_id, r.split, SPLITS))
            if r.label not in LABELS:
                raise ValueError("Paper '{}' has label {!r}. Options are: {}"
                                 "".format(r.paper_id, r.label, LABELS))
            unknown = [k for k in r.paths if k not in PATH_KEYS]
            if unknown:
                raise ValueError("Paper '{}' has unknown path key(s) {}. "
                                 "Options are: {}".format(r.paper_id, unknown,
                                                          PATH_KEYS))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def split(self, name):
        """ Records of one split, in manifest order. """
        return [r for r in self.records if r.split == name]

    def require_splits(self, names):
        """
        Raises:
            EmptySplit: If one of the named splits has no record.
        """
        for name in names:
            if not self.split(name):
                raise EmptySplit("The manifest has no '{}' papers."
                                 "".format(name))

    def path(self, record, key):
        """ Absolute path of an artifact, or None if the record lacks it. """
        p = record.paths.get(key)
        if p is None:
            return None
        return p if os.path.isabs(p) else os.path.join(self.root, p)

    def default_path(self, record, key, directory, ext='.json'):
        """ The artifact path, defaulting to ``<directory>/<paper_id><ext>``
        relative to the manifest root when the record names none.

        """
        if key not in record.paths:
            record.paths[key] = os.path.join(directory, record.paper_id + ext)
        return self.path(record, key)

    # -- Statistics ----------------------------------------------------------

    def stats(self):
        """ Paper counts per split and decision.

        Returns:
            DataFrame: One row per split, columns 'accept', 'reject' and
            'total'.
        """
        df = pd.DataFrame([{'split': r.split, 'label': r.label}
                           for r in self.records],
                          columns=['split', 'label'])
        table = pd.crosstab(df['split'], df['label']) \
            .reindex(index=SPLITS, columns=LABELS, fill_value=0)
        table['total'] = table.sum(axis=1)
        return table

    def table(self, tablefmt='simple'):
        stats = self.stats()
        return tabulate(stats.reset_index().values.tolist(),
                        headers=['split'] + list(stats.columns),
                        tablefmt=tablefmt)

    def __str__(self):
        return self.table()

    # -- File I/O ------------------------------------------------------------

    def to_jsonl(self):
        return ''.join(json.dumps(r.to_dict(), ensure_ascii=False) + '\n'
                       for r in self.records)

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_jsonl())


def load_manifest(path):
    """ Read a JSON-lines manifest.

    Raises:
        NotJson: On an undecodable line.
        ValueError: On an invalid record.
    """
    records = []
    with open(path, 'r', encoding='utf-8') as f:
        for n, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                records.append(ManifestRecord(d['paper_id'], d['split'],
                                              d.get('label'),
                                              dict(d.get('paths', {})),
                                              d.get('title')))
            except (ValueError, KeyError, TypeError) as err:
                raise NotJson("{}:{}: bad manifest record ({})"
                              "".format(path, n, err))
    return DatasetManifest(records,
                           root=os.path.dirname(os.path.abspath(path)))
