""" Provide the ``Checkpoint`` class and its binary file format.

File layout::

    b'RVGC'                      magic
    <u32 little-endian>          manifest length in bytes
    <UTF-8 JSON manifest>        version, configs, epoch, best score and
                                 {name, shape, offset, length} per tensor
    <fp32 little-endian payload> tensors in parameter order

Offsets and lengths count bytes from the start of the payload.

"""

# -- Imports -----------------------------------------------------------------
import json
import struct

import numpy as np

from reviewgraph.exceptions import (
    CheckpointIoError, CorruptPayload, VersionMismatch)
from reviewgraph.model.config import ModelConfig
from reviewgraph.model.hgt import init_params
from reviewgraph.training.config import TrainConfig

MAGIC = b'RVGC'
FORMAT_VERSION = 1
_DTYPE = np.dtype('<f4')


# -- Checkpoint Class --------------------------------------------------------

class Checkpoint(object):
    """ Class to represent a trained model with its settings.

    """

    def __init__(self, model_config, train_config, params, epoch=0,
                 best_val_f1=0.0, version=FORMAT_VERSION):
        self.version = version
        self.model_config = model_config
        self.train_config = train_config
        self.params = params
        self.epoch = epoch
        self.best_val_f1 = best_val_f1

    def manifest(self):
        tensors, offset = [], 0
        for name, t in self.params.items():
            length = int(t.data.size) * _DTYPE.itemsize
            tensors.append({'name': name, 'shape': list(t.shape),
                            'offset': offset, 'length': length})
            offset += length
        return {'format_version': self.version,
                'model_config': self.model_config.to_dict(),
                'train_config': self.train_config.to_dict(),
                'epoch': self.epoch,
                'best_val_f1': self.best_val_f1,
                'tensors': tensors}

    def to_bytes(self):
        header = json.dumps(self.manifest(), sort_keys=True).encode('utf-8')
        payload = b''.join(t.data.astype(_DTYPE).tobytes()
                           for _, t in self.params.items())
        return MAGIC + struct.pack('<I', len(header)) + header + payload

    @classmethod
    def from_bytes(cls, blob):
        """ Decode a checkpoint.

        Raises:
            CorruptPayload: On a bad magic, header or payload length, or a
                manifest with missing or malformed fields.
            VersionMismatch: On an unknown format version.
        """
        if len(blob) < 8 or blob[:4] != MAGIC:
            raise CorruptPayload("Not a checkpoint file (bad magic).")
        (size,) = struct.unpack('<I', blob[4:8])
        if len(blob) < 8 + size:
            raise CorruptPayload("Checkpoint header is truncated.")
        try:
            manifest = json.loads(blob[8:8 + size].decode('utf-8'))
        except ValueError as err:
            raise CorruptPayload("Checkpoint manifest is not JSON: {}"
                                 "".format(err))
        if not isinstance(manifest, dict):
            raise CorruptPayload("Checkpoint manifest is not a JSON object.")
        version = manifest.get('format_version')
        if version != FORMAT_VERSION:
            raise VersionMismatch("Checkpoint format version {} is not "
                                  "supported (expected {})."
                                  "".format(version, FORMAT_VERSION))
        try:
            return cls._decode(manifest, blob[8 + size:])
        except CorruptPayload:
            raise
        except KeyError as err:
            raise CorruptPayload("Checkpoint manifest lacks field {}."
                                 "".format(err))
        except (TypeError, AttributeError, ValueError) as err:
            raise CorruptPayload("Checkpoint manifest is malformed: {}"
                                 "".format(err))

    @classmethod
    def _decode(cls, manifest, payload):
        expected = sum(t['length'] for t in manifest['tensors'])
        if len(payload) != expected:
            raise CorruptPayload("Checkpoint payload has {} bytes, the "
                                 "manifest lists {}."
                                 "".format(len(payload), expected))

        arrays = {}
        for t in manifest['tensors']:
            count = int(np.prod(t['shape'])) if t['shape'] else 1
            if t['length'] != count * _DTYPE.itemsize:
                raise CorruptPayload("Tensor '{}' length {} does not match "
                                     "shape {}.".format(t['name'], t['length'],
                                                        t['shape']))
            raw = payload[t['offset']:t['offset'] + t['length']]
            if len(raw) != t['length']:
                raise CorruptPayload("Tensor '{}' runs past the payload."
                                     "".format(t['name']))
            arrays[t['name']] = np.frombuffer(raw, dtype=_DTYPE).reshape(
                t['shape']).astype(np.float64)

        model_config = ModelConfig(**manifest['model_config'])
        params = init_params(model_config)
        try:
            params.load_arrays(arrays)
        except (KeyError, ValueError) as err:
            raise CorruptPayload("Checkpoint tensors do not fit the model "
                                 "config: {}".format(err))
        return cls(model_config, TrainConfig(**manifest['train_config']),
                   params, epoch=manifest['epoch'],
                   best_val_f1=manifest['best_val_f1'],
                   version=manifest['format_version'])


# -- File I/O ----------------------------------------------------------------

def save_checkpoint(cp, path):
    """ Write a checkpoint file. """
    try:
        with open(path, 'wb') as f:
            f.write(cp.to_bytes())
    except OSError as err:
        raise CheckpointIoError("Cannot write checkpoint '{}': {}"
                                "".format(path, err))


def load_checkpoint(path):
    """ Read a checkpoint file. """
    try:
        with open(path, 'rb') as f:
            blob = f.read()
    except OSError as err:
        raise CheckpointIoError("Cannot read checkpoint '{}': {}"
                                "".format(path, err))
    return Checkpoint.from_bytes(blob)
