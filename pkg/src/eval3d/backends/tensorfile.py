"""Binary tensor container for engine <-> backend interchange.

Layout (all little-endian):

    magic   4 bytes  "ETNS"
    version u32      1
    dtype   u8       1 = float32, 2 = uint8
    ndim    u32
    dims    ndim x u64
    payload row-major array data

The round trip write -> read is bit-identical.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import TensorFileError

MAGIC = b"ETNS"
VERSION = 1
_DTYPE_CODES = {np.dtype("<f4"): 1, np.dtype("u1"): 2}
_CODE_DTYPES = {1: np.dtype("<f4"), 2: np.dtype("u1")}


def write_tensor(data: np.ndarray, path: str | Path) -> None:
    """Serialize a float32 or uint8 array. Zero-size dims are rejected."""
    arr = np.ascontiguousarray(data)
    if arr.dtype == np.float64:
        arr = arr.astype(np.float32)
    if arr.dtype.newbyteorder("<") not in _DTYPE_CODES:
        raise TensorFileError("bad dtype", f"unsupported dtype {arr.dtype}")
    if arr.ndim == 0 or any(d == 0 for d in arr.shape):
        raise TensorFileError("bad header", f"dims must be nonzero, got {arr.shape}")
    code = _DTYPE_CODES[arr.dtype.newbyteorder("<")]
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<B", code))
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes())


def read_tensor(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 13 or raw[:4] != MAGIC:
        raise TensorFileError("bad magic", str(path))
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != VERSION:
        raise TensorFileError("bad version", f"got {version}, want {VERSION}")
    (code,) = struct.unpack_from("<B", raw, 8)
    if code not in _CODE_DTYPES:
        raise TensorFileError("bad dtype", f"unknown dtype code {code}")
    (ndim,) = struct.unpack_from("<I", raw, 9)
    header_end = 13 + 8 * ndim
    if len(raw) < header_end or ndim == 0:
        raise TensorFileError("bad header", f"ndim {ndim}")
    dims = struct.unpack_from(f"<{ndim}Q", raw, 13)
    if any(d == 0 for d in dims):
        raise TensorFileError("bad header", f"zero dim in {dims}")
    dtype = _CODE_DTYPES[code]
    count = int(np.prod(dims))
    expected = header_end + count * dtype.itemsize
    if len(raw) < expected:
        raise TensorFileError(
            "short payload", f"file {len(raw)} bytes, need {expected}"
        )
    arr = np.frombuffer(raw, dtype=dtype, count=count, offset=header_end)
    return arr.reshape(dims).copy()
