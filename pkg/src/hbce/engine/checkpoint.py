"""Binary checkpoint format (little-endian).

Layout::

    b"HBCE"                      magic
    u32                          format version
    u32 x 6                      height, width, output_labels, conv_filters,
                                 conv_kernel, dense_units
    f64                          dropout_rate
    u64                          tensor count
    per tensor: u32 rank, u32 x rank dims, f64 x prod(dims) payload

Tensors appear in ``PARAM_NAMES`` order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .model import PARAM_NAMES, Classifier, ModelConfig, ShapeMismatchError

MAGIC = b"HBCE"
VERSION = 1


class CheckpointError(ValueError):
    pass


def checkpoint_bytes(model: Classifier) -> bytes:
    cfg = model.config
    parts = [
        MAGIC,
        struct.pack("<I", VERSION),
        struct.pack("<6I", cfg.height, cfg.width, cfg.output_labels, cfg.conv_filters,
                    cfg.conv_kernel, cfg.dense_units),
        struct.pack("<d", cfg.dropout_rate),
        struct.pack("<Q", len(PARAM_NAMES)),
    ]
    for name in PARAM_NAMES:
        arr = np.ascontiguousarray(model.params[name], dtype="<f8")
        parts.append(struct.pack(f"<I{arr.ndim}I", arr.ndim, *arr.shape))
        parts.append(arr.tobytes())
    return b"".join(parts)


def save_checkpoint(model: Classifier, path):
    Path(path).write_bytes(checkpoint_bytes(model))


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise CheckpointError("checkpoint truncated: payload shorter than its shape table")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def parse_checkpoint(buf: bytes) -> Classifier:
    r = _Reader(buf)
    if r.take(4) != MAGIC:
        raise CheckpointError("not an HBCE checkpoint (bad magic)")
    (version,) = r.unpack("<I")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    dims = r.unpack("<6I")
    (dropout,) = r.unpack("<d")
    try:
        cfg = ModelConfig(*dims, dropout_rate=dropout)
    except ValueError as exc:
        raise CheckpointError(f"invalid model config block: {exc}") from None
    (count,) = r.unpack("<Q")
    if count != len(PARAM_NAMES):
        raise CheckpointError(f"expected {len(PARAM_NAMES)} tensors, header says {count}")
    expected = cfg.param_shapes()
    params = {}
    for name in PARAM_NAMES:
        (rank,) = r.unpack("<I")
        shape = r.unpack(f"<{rank}I")
        if tuple(shape) != expected[name]:
            raise CheckpointError(f"{name}: shape {shape} inconsistent with config {expected[name]}")
        n = int(np.prod(shape))
        params[name] = np.frombuffer(r.take(8 * n), dtype="<f8").astype(np.float64).reshape(shape)
    if r.pos != len(buf):
        raise CheckpointError("trailing bytes after the last tensor")
    return Classifier(cfg, params)


def load_checkpoint(path, expected_labels: int | None = None) -> Classifier:
    """Read a checkpoint; optionally require a given number of output labels."""
    try:
        buf = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    model = parse_checkpoint(buf)
    if expected_labels is not None and model.config.output_labels != expected_labels:
        raise ShapeMismatchError(
            f"checkpoint has {model.config.output_labels} output labels, expected {expected_labels}")
    return model
