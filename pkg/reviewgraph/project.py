""" Provide the ``RunConfig`` class.

A run configuration gathers everything a command needs: model and training
hyper-parameters, the ablation mode, the endpoint settings, the shared seed
and the artifact paths. It is stored as one JSON document::

    {"model": {...}, "train": {...}, "endpoint": {...},
     "ablation": "full", "seed": 0, "jobs": 1, "paths": {...}}

"""

# -- Imports -----------------------------------------------------------------
import json
import os

from reviewgraph.agents.endpoint import EndpointConfig
from reviewgraph.graph.schema import AblationMode
from reviewgraph.model.config import ModelConfig
from reviewgraph.training.config import TrainConfig

# Artifact paths and their defaults, relative to the work directory
DEFAULT_PATHS = {
    'manifest': 'manifest.jsonl',
    'work_dir': '.',
    'embedding_cache': 'embeddings.jsonl',
    'checkpoint': 'model.ckpt',
    'history': 'history.jsonl',
    'history_plot': None,
    'report': 'report.json',
}


# -- RunConfig Class ---------------------------------------------------------

class RunConfig(object):
    """ Class to represent the configuration of a run.

    """

    def __init__(self, **kwargs):
        """
        Keyword Args:
            model (dict): ``ModelConfig`` keyword arguments. ``input_dim``
                may be left out; it is filled from the embeddings.

            train (dict): ``TrainConfig`` keyword arguments.

            endpoint (dict): ``EndpointConfig`` keyword arguments.

            ablation (str): Ablation mode of built graphs. Default is
                'full'.

            seed (int): The single seed of the run; it overrides the model
                and training seeds. Default is 0.

            jobs (int): Parallel requests per stage. Default is 1.

            paths (dict): Artifact paths; see ``DEFAULT_PATHS``.

        """
        allowed_keys = ['model', 'train', 'endpoint', 'ablation', 'seed',
                        'jobs', 'paths']
        for key in kwargs:
            if key not in allowed_keys:
                raise AttributeError("'{}' is not a valid attribute.\nThe "
                                     "allowed attributes are: {}"
                                     "".format(key, allowed_keys))

        self.model = dict(kwargs.get('model', {}))
        self.train = dict(kwargs.get('train', {}))
        self.endpoint = EndpointConfig(**kwargs.get('endpoint', {}))
        self.ablation = AblationMode(kwargs.get('ablation', 'full'))
        self.seed = int(kwargs.get('seed', 0))
        self.jobs = int(kwargs.get('jobs', 1))

        unknown = [k for k in kwargs.get('paths', {}) if k not in
                   DEFAULT_PATHS]
        if unknown:
            raise AttributeError("Unknown path key(s) {}. The allowed keys "
                                 "are: {}".format(unknown, list(DEFAULT_PATHS)))
        self.paths = dict(DEFAULT_PATHS)
        self.paths.update(kwargs.get('paths', {}))

        if self.jobs < 1:
            raise ValueError("jobs must be at least 1, not {}."
                             "".format(self.jobs))
        # Fail early on bad hyper-parameters
        self.model_config(self.model.get('input_dim') or 1)
        self.train_config()

    # -- Derived configs -----------------------------------------------------

    def model_config(self, input_dim, ablation=None):
        """ ``ModelConfig`` for embeddings of width ``input_dim``. The
        homogeneous ablation selects the single-type model.

        """
        ablation = AblationMode(ablation or self.ablation)
        d = dict(self.model)
        d.update(input_dim=int(input_dim), seed=self.seed,
                 homogeneous=ablation is AblationMode.HOMOGENEOUS)
        return ModelConfig(**d)

    def train_config(self):
        d = dict(self.train)
        d['seed'] = self.seed
        return TrainConfig(**d)

    def path(self, key):
        """ Absolute path of an artifact, or None when it is switched off.
        """
        p = self.paths.get(key)
        if p is None:
            return None
        if key == 'work_dir' or os.path.isabs(p):
            return p
        return os.path.join(self.paths['work_dir'], p)

    def check_paths(self, keys):
        """
        Raises:
            FileNotFoundError: Naming the first configured path that does
                not exist.
        """
        for key in keys:
            p = self.path(key)
            if p is None or not os.path.exists(p):
                raise FileNotFoundError("The '{}' path {!r} does not exist."
                                        "".format(key, p))

    # -- Conversion ----------------------------------------------------------

    def to_dict(self):
        return {'model': dict(self.model), 'train': dict(self.train),
                'endpoint': self.endpoint.to_dict(),
                'ablation': self.ablation.value, 'seed': self.seed,
                'jobs': self.jobs, 'paths': dict(self.paths)}

    def replace(self, **kwargs):
        d = self.to_dict()
        d.update(kwargs)
        return RunConfig(**d)

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=1, sort_keys=True)
            f.write('\n')

    def __eq__(self, other):
        return isinstance(other, RunConfig) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'RunConfig(ablation={!r}, seed={}, jobs={})'.format(
            self.ablation.value, self.seed, self.jobs)


def load_run_config(path):
    """ Read a run configuration file. A relative ``work_dir`` is taken
    relative to the file.

    """
    with open(path, 'r', encoding='utf-8') as f:
        d = json.load(f)
    paths = d.setdefault('paths', {})
    work_dir = paths.get('work_dir', '.')
    if not os.path.isabs(work_dir):
        paths['work_dir'] = os.path.join(
            os.path.dirname(os.path.abspath(path)), work_dir)
    return RunConfig(**d)
