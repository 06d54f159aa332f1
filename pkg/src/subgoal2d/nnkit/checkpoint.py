"""Checkpoint file format.

Layout: magic ``CKPT``, u32 little-endian metadata length, JSON metadata
(model kind, array shapes/order, step count, config hash), then each array as
raw float32 little-endian bytes followed by its CRC32.  The EMA shadow is
stored alongside the raw parameters under the same names.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from .params import ParameterStore

MAGIC = b"CKPT"
FORMAT_VERSION = 1


class CheckpointError(Exception):
    code = "checkpoint_error"


class CheckpointVersionError(CheckpointError):
    code = "checkpoint_version"


class CheckpointTruncatedError(CheckpointError):
    code = "checkpoint_truncated"


class CheckpointChecksumError(CheckpointError):
    code = "checkpoint_checksum"


def save_checkpoint(
    path: str | Path,
    store: ParameterStore,
    model_kind: str,
    config_hash: str = "",
    extra: dict | None = None,
) -> None:
    arrays: list[tuple[str, bool, np.ndarray]] = []
    for name, arr in store.params.items():
        arrays.append((name, False, arr))
    if store.shadow is not None:
        for name, arr in store.shadow.items():
            arrays.append((name, True, arr))
    meta = {
        "format_version": FORMAT_VERSION,
        "model_kind": model_kind,
        "step_count": store.step_count,
        "config_hash": config_hash,
        "has_ema": store.shadow is not None,
        "arrays": [
            {"name": name, "ema": ema, "shape": list(arr.shape)} for name, ema, arr in arrays
        ],
    }
    if extra:
        meta["extra"] = extra
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(meta_bytes)))
        f.write(meta_bytes)
        for _, _, arr in arrays:
            payload = np.ascontiguousarray(arr, dtype="<f4").tobytes()
            f.write(payload)
            f.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))


def _read_exact(f, n: int) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise CheckpointTruncatedError(f"expected {n} bytes, got {len(data)}")
    return data


def load_checkpoint(path: str | Path) -> tuple[ParameterStore, dict]:
    with open(path, "rb") as f:
        if _read_exact(f, 4) != MAGIC:
            raise CheckpointVersionError("bad magic; not a checkpoint file")
        (meta_len,) = struct.unpack("<I", _read_exact(f, 4))
        meta = json.loads(_read_exact(f, meta_len).decode("utf-8"))
        if meta.get("format_version") != FORMAT_VERSION:
            raise CheckpointVersionError(
                f"unsupported checkpoint version {meta.get('format_version')}"
            )
        params: dict[str, np.ndarray] = {}
        shadow: dict[str, np.ndarray] = {}
        for spec in meta["arrays"]:
            shape = tuple(spec["shape"])
            n_bytes = 4 * int(np.prod(shape)) if shape else 4
            payload = _read_exact(f, n_bytes)
            (crc,) = struct.unpack("<I", _read_exact(f, 4))
            if zlib.crc32(payload) & 0xFFFFFFFF != crc:
                raise CheckpointChecksumError(f"CRC mismatch for array {spec['name']!r}")
            arr = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()
            (shadow if spec["ema"] else params)[spec["name"]] = arr
    store = ParameterStore(params, ema=False)
    if meta.get("has_ema"):
        store.shadow = shadow
    store.step_count = int(meta.get("step_count", 0))
    return store, meta
