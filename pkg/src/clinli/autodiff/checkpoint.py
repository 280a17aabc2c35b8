"""Binary parameter checkpoints.

Layout (all integers little-endian):

    magic   4 bytes  b"CLCK"
    version u32      currently 1
    count   u32      number of entries
    entry*  count times:
        name_len u16, name utf-8 bytes
        ndim     u8,  dims u32 * ndim
        data     float64 little-endian, row-major, prod(dims) values

Round-trips are bit-exact: values are written as raw IEEE-754 doubles.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ClinliError
from .tensor import Tensor

MAGIC = b"CLCK"
VERSION = 1


class CheckpointError(ClinliError):
    pass


def save_params(path, params: dict) -> None:
    """Write name -> array (or Tensor) mappings; insertion order is preserved."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(params)))
        for name, value in params.items():
            arr = value.data if isinstance(value, Tensor) else np.asarray(value)
            arr = np.asarray(arr, dtype=np.float64, order="C")
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<B", arr.ndim))
            for dim in arr.shape:
                fh.write(struct.pack("<I", dim))
            fh.write(arr.astype("<f8").tobytes(order="C"))


def load_params(path) -> dict[str, np.ndarray]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic {blob[:4]!r}")
    version, count = struct.unpack_from("<II", blob, 4)
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    out = {}
    offset = 12
    for _ in range(count):
        (name_len,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        name = blob[offset : offset + name_len].decode("utf-8")
        offset += name_len
        (ndim,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        dims = struct.unpack_from(f"<{ndim}I", blob, offset) if ndim else ()
        offset += 4 * ndim
        n_values = int(np.prod(dims)) if ndim else 1
        arr = np.frombuffer(blob, dtype="<f8", count=n_values, offset=offset).reshape(dims)
        offset += 8 * n_values
        out[name] = arr.astype(np.float64).copy()
    if offset != len(blob):
        raise CheckpointError(f"{path}: {len(blob) - offset} trailing bytes")
    return out
