import json
import os

import pytest

from .context import reviewgraph  # noqa: F401
from reviewgraph.exceptions import EmptySplit, NotJson
from reviewgraph.manifest import DatasetManifest, ManifestRecord, load_manifest
from reviewgraph.model import ModelConfig
from reviewgraph.project import RunConfig, load_run_config


def case_a():
    return DatasetManifest([
        ManifestRecord('p1', 'train', 'accept',
                       {'paper': 'papers/p1.json'}),
        ManifestRecord('p2', 'train', 'reject'),
        ManifestRecord('p3', 'train', 'reject'),
        ManifestRecord('p4', 'val', 'accept', title='A title'),
        ManifestRecord('p5', 'test', 'reject',
                       {'graph': '/data/graphs/p5.json'}),
    ], root='/work')


def test_case_a():
    m = case_a()
    stats = m.stats()

    assert len(m) == 5
    assert stats.loc['train', 'reject'] == 2
    assert stats.loc['val', 'total'] == 1
    assert stats['total'].sum() == 5
    assert [r.paper_id for r in m.split('train')] == ['p1', 'p2', 'p3']
    assert 'train' in m.table()


def test_paths():
    m = case_a()
    p1, p2, p5 = m.records[0], m.records[1], m.records[4]

    assert m.path(p1, 'paper') == os.path.join('/work', 'papers/p1.json')
    assert m.path(p1, 'graph') is None
    assert m.path(p5, 'graph') == '/data/graphs/p5.json'
    assert m.default_path(p2, 'graph', 'graphs') == \
        os.path.join('/work', 'graphs', 'p2.json')
    assert p2.paths['graph'] == os.path.join('graphs', 'p2.json')


def test_require_splits():
    m = DatasetManifest([ManifestRecord('p1', 'train', 'accept')])
    m.require_splits(['train'])
    with pytest.raises(EmptySplit):
        m.require_splits(['train', 'val'])


def test_bad_records():
    with pytest.raises(ValueError):
        DatasetManifest([ManifestRecord('p1', 'train', 'accept'),
                         ManifestRecord('p1', 'val', 'reject')])
    with pytest.raises(ValueError):
        DatasetManifest([ManifestRecord('p1', 'dev', 'accept')])
    with pytest.raises(ValueError):
        DatasetManifest([ManifestRecord('p1', 'train', None)])
    with pytest.raises(ValueError):
        DatasetManifest([ManifestRecord('p1', 'train', 'accept',
                                        {'pdf': 'p1.pdf'})])


def test_manifest_file(tmp_path):
    path = str(tmp_path / 'manifest.jsonl')
    case_a().save(path)
    again = load_manifest(path)

    assert again.root == str(tmp_path)
    assert [r.to_dict() for r in again] == [r.to_dict() for r in case_a()]


def test_manifest_not_json(tmp_path):
    path = tmp_path / 'manifest.jsonl'
    path.write_text('{"paper_id": "p1", "split": "train"}\nnot json\n')
    with pytest.raises(NotJson):
        load_manifest(str(path))


# -- RunConfig ---------------------------------------------------------------

def test_run_config_defaults():
    rc = RunConfig()

    assert rc.ablation.value == 'full'
    assert rc.path('checkpoint') == os.path.join('.', 'model.ckpt')
    assert rc.path('history_plot') is None


def test_run_config_seed_overrides():
    rc = RunConfig(model={'hidden_dim': 8, 'num_heads': 2, 'seed': 99},
                   train={'seed': 99}, seed=3, ablation='homogeneous')
    config = rc.model_config(16)

    assert isinstance(config, ModelConfig)
    assert config.seed == 3
    assert config.input_dim == 16
    assert config.homogeneous
    assert rc.train_config().seed == 3
    assert not rc.model_config(16, ablation='full').homogeneous


def test_run_config_checks():
    with pytest.raises(AttributeError):
        RunConfig(optimizer='sgd')
    with pytest.raises(AttributeError):
        RunConfig(paths={'logs': 'x'})
    with pytest.raises(ValueError):
        RunConfig(jobs=0)
    with pytest.raises(ValueError):
        RunConfig(ablation='no_titles')
    with pytest.raises(ValueError):
        RunConfig(model={'hidden_dim': 10, 'num_heads': 4})


def test_run_config_file(tmp_path):
    path = str(tmp_path / 'run.json')
    rc = RunConfig(seed=5, jobs=2, paths={'checkpoint': 'out/m.ckpt'})
    rc.save(path)
    again = load_run_config(path)

    assert again.seed == 5
    assert again.path('checkpoint') == os.path.join(str(tmp_path), '.',
                                                    'out/m.ckpt')
    assert again.replace(seed=6).seed == 6
    with open(path) as f:
        assert json.load(f)['ablation'] == 'full'


def test_missing_paths(tmp_path):
    rc = RunConfig(paths={'work_dir': str(tmp_path)})
    (tmp_path / 'manifest.jsonl').write_text('')
    rc.check_paths(['manifest'])
    with pytest.raises(FileNotFoundError):
        rc.check_paths(['manifest', 'checkpoint'])
