import json
import struct

import numpy as np
import pytest

from .context import random_debate_graph, varied_graphs
from reviewgraph.exceptions import (CheckpointIoError, CorruptPayload,
                                    VersionMismatch)
from reviewgraph.model import ModelConfig
from reviewgraph.model.hgt import init_params, predict
from reviewgraph.training import (Checkpoint, TrainConfig, load_checkpoint,
                                  save_checkpoint)
from reviewgraph.training.checkpoint import MAGIC


def case_a():
    config = ModelConfig(hidden_dim=8, num_heads=2, input_dim=4,
                         ffn_hidden=4, seed=5)
    return Checkpoint(config, TrainConfig(learning_rate=1e-3),
                      init_params(config), epoch=7, best_val_f1=0.625)


def test_case_a(tmp_path):
    cp = case_a()
    path = str(tmp_path / 'model.ckpt')
    save_checkpoint(cp, path)
    again = load_checkpoint(path)

    assert again.model_config == cp.model_config
    assert again.train_config == cp.train_config
    assert again.epoch == 7
    assert again.best_val_f1 == 0.625
    assert again.params.names() == cp.params.names()
    for name in cp.params:
        np.testing.assert_array_equal(again.params[name].data,
                                      cp.params[name].data.astype(np.float32))


def test_restored_model_predicts_the_same(tmp_path):
    cp = case_a()
    g, x = random_debate_graph(2, 4)
    path = str(tmp_path / 'model.ckpt')
    save_checkpoint(cp, path)

    np.testing.assert_allclose(predict(g, x, load_checkpoint(path).params)[0],
                               predict(g, x, cp.params)[0], atol=1e-5)


def test_bad_magic():
    blob = case_a().to_bytes()
    with pytest.raises(CorruptPayload):
        Checkpoint.from_bytes(b'XXXX' + blob[4:])


def test_truncated_payload():
    blob = case_a().to_bytes()
    with pytest.raises(CorruptPayload):
        Checkpoint.from_bytes(blob[:-4])


def test_version_mismatch():
    blob = case_a().to_bytes()
    (size,) = struct.unpack('<I', blob[4:8])
    header = blob[8:8 + size].replace(b'"format_version": 1',
                                      b'"format_version": 9')
    with pytest.raises(VersionMismatch):
        Checkpoint.from_bytes(MAGIC + struct.pack('<I', len(header))
                              + header + blob[8 + size:])


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointIoError):
        load_checkpoint(str(tmp_path / 'absent.ckpt'))


def test_restored_model_agrees_on_labels():
    cp = case_a()
    again = Checkpoint.from_bytes(cp.to_bytes())
    for g, x in varied_graphs(20, seed=11):
        assert np.argmax(predict(g, x, again.params)[0]) == \
            np.argmax(predict(g, x, cp.params)[0])


def rewrite_manifest(blob, edit):
    (size,) = struct.unpack('<I', blob[4:8])
    manifest = json.loads(blob[8:8 + size].decode('utf-8'))
    edit(manifest)
    header = json.dumps(manifest).encode('utf-8')
    return MAGIC + struct.pack('<I', len(header)) + header + blob[8 + size:]


@pytest.mark.parametrize('edit', [
    lambda m: m.pop('tensors'),
    lambda m: m.pop('model_config'),
    lambda m: m['model_config'].update(colour='blue'),
    lambda m: m.update(model_config=[1, 2]),
    lambda m: m['tensors'].append({'name': 'extra'}),
])
def test_malformed_manifest(edit):
    blob = rewrite_manifest(case_a().to_bytes(), edit)
    with pytest.raises(CorruptPayload):
        Checkpoint.from_bytes(blob)
