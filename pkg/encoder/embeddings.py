"""
NWRZ-EMB-1 files: precomputed (context, filler) vectors from an external encoder.

Layout::

    NWRZ-EMB-1\n
    {"count": N, "dim": D}\n
    N records of:
        uint32 LE   byte length of the context id
        bytes       context id (UTF-8)
        uint32 LE   filler index
        float64 LE  context vector (D values)
        float64 LE  filler vector (D values)
"""

import json
from pathlib import Path

import attrs
import numpy as np

from common.errors import ConfigurationError, DataValidationError

FORMAT_TAG = "NWRZ-EMB-1"
_U32 = np.dtype("<u4")
_F64 = np.dtype("<f8")

EmbeddingKey = tuple[str, int]


@attrs.define(eq=False)
class EmbeddingTable:
    """Context and filler vectors keyed by (context id, filler index)."""

    dim: int
    records: dict[EmbeddingKey, tuple[np.ndarray, np.ndarray]] = attrs.field(factory=dict)

    def add(self, key: EmbeddingKey, context_vec, filler_vec) -> None:
        context_vec = np.asarray(context_vec, dtype=np.float64)
        filler_vec = np.asarray(filler_vec, dtype=np.float64)
        if context_vec.shape != (self.dim,) or filler_vec.shape != (self.dim,):
            raise ConfigurationError(
                f"embedding for {key} must have two vectors of dim {self.dim}, "
                f"got {context_vec.shape} and {filler_vec.shape}"
            )
        self.records[(str(key[0]), int(key[1]))] = (context_vec, filler_vec)

    def lookup(self, key: EmbeddingKey) -> tuple[np.ndarray, np.ndarray]:
        try:
            return self.records[key]
        except KeyError:
            raise DataValidationError(
                f"no embedding record for context {key[0]!r}, filler {key[1]}"
            ) from None

    def __len__(self) -> int:
        return len(self.records)


def write_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        f.write(f"{FORMAT_TAG}\n".encode("utf-8"))
        header = json.dumps({"count": len(table), "dim": table.dim}, sort_keys=True)
        f.write(header.encode("utf-8") + b"\n")
        for (context_id, filler_index), (ctx, fil) in table.records.items():
            key_bytes = context_id.encode("utf-8")
            f.write(np.array([len(key_bytes)], dtype=_U32).tobytes())
            f.write(key_bytes)
            f.write(np.array([filler_index], dtype=_U32).tobytes())
            f.write(np.ascontiguousarray(ctx, dtype=_F64).tobytes())
            f.write(np.ascontiguousarray(fil, dtype=_F64).tobytes())


def read_embeddings(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Embedding file not found at: {path}")

    raw = path.read_bytes()
    tag_end = raw.find(b"\n")
    if tag_end < 0 or raw[:tag_end] != FORMAT_TAG.encode("utf-8"):
        raise ConfigurationError(f"{path} is not a {FORMAT_TAG} file")
    header_end = raw.find(b"\n", tag_end + 1)
    try:
        header = json.loads(raw[tag_end + 1 : header_end].decode("utf-8"))
        count, dim = int(header["count"]), int(header["dim"])
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigurationError(f"{path}: malformed embedding header ({e})") from e

    table = EmbeddingTable(dim=dim)
    pos = header_end + 1
    vec_bytes = dim * _F64.itemsize
    try:
        for _ in range(count):
            (key_len,) = np.frombuffer(raw, dtype=_U32, count=1, offset=pos)
            pos += _U32.itemsize
            context_id = raw[pos : pos + int(key_len)].decode("utf-8")
            pos += int(key_len)
            (filler_index,) = np.frombuffer(raw, dtype=_U32, count=1, offset=pos)
            pos += _U32.itemsize
            ctx = np.frombuffer(raw, dtype=_F64, count=dim, offset=pos).astype(np.float64)
            pos += vec_bytes
            fil = np.frombuffer(raw, dtype=_F64, count=dim, offset=pos).astype(np.float64)
            pos += vec_bytes
            table.add((context_id, int(filler_index)), ctx, fil)
    except ValueError as e:
        raise ConfigurationError(f"{path}: truncated embedding records ({e})") from e
    if pos != len(raw):
        raise ConfigurationError(f"{path}: {len(raw) - pos} trailing bytes after records")
    return table
