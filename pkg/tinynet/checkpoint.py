"""
NWRZ-CKPT-1 checkpoint files.

Layout::

    NWRZ-CKPT-1\n
    <one line of JSON header, keys sorted>\n
    <tensor data: float64 little-endian, tensors in header order>

The header records model dimensions, featurizer config, pooling and binning
modes, the seed, and the name and shape of every tensor.
"""

import json
from pathlib import Path

import numpy as np

from common.errors import ConfigurationError
from encoder.featurize import FeaturizerConfig
from schemas.schemas import BinningMode, PoolingMode

from .model import PARAM_NAMES, ModelParams, init_model

FORMAT_TAG = "NWRZ-CKPT-1"
_DTYPE = np.dtype("<f8")


def checkpoint_header(model: ModelParams) -> dict:
    params = model.parameters()
    return {
        "format": FORMAT_TAG,
        "input_dim": model.input_dim,
        "hidden_dim": model.hidden_dim,
        "class_units": int(model.class_head.biases.shape[0]),
        "score_units": int(model.score_head.biases.shape[0]),
        "featurizer": model.featurizer.to_dict(),
        "pooling": model.pooling.value,
        "binning": model.binning.value,
        "seed": model.seed,
        "uses_embeddings": model.uses_embeddings,
        "tensors": [[name, list(params[name].shape)] for name in PARAM_NAMES],
    }


def save_checkpoint(model: ModelParams, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    header = json.dumps(checkpoint_header(model), sort_keys=True, separators=(",", ":"))
    params = model.parameters()
    with path.open("wb") as f:
        f.write(f"{FORMAT_TAG}\n".encode("utf-8"))
        f.write(header.encode("utf-8") + b"\n")
        for name in PARAM_NAMES:
            f.write(np.ascontiguousarray(params[name], dtype=_DTYPE).tobytes())


def load_checkpoint(path: str | Path) -> ModelParams:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found at: {path}")

    raw = path.read_bytes()
    tag_end = raw.find(b"\n")
    if tag_end < 0 or raw[:tag_end].decode("utf-8", errors="replace") != FORMAT_TAG:
        raise ConfigurationError(f"{path} is not a {FORMAT_TAG} checkpoint")
    header_end = raw.find(b"\n", tag_end + 1)
    if header_end < 0:
        raise ConfigurationError(f"{path}: truncated checkpoint header")

    try:
        header = json.loads(raw[tag_end + 1 : header_end].decode("utf-8"))
        featurizer = FeaturizerConfig.from_dict(header["featurizer"])
        pooling = PoolingMode(header["pooling"])
        binning = BinningMode(header["binning"])
        seed = int(header["seed"])
        tensors = [(name, tuple(shape)) for name, shape in header["tensors"]]
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigurationError(f"{path}: malformed checkpoint header ({e})") from e

    if [name for name, _ in tensors] != list(PARAM_NAMES):
        raise ConfigurationError(f"{path}: unexpected tensor list {[n for n, _ in tensors]}")

    data = raw[header_end + 1 :]
    params: dict[str, np.ndarray] = {}
    offset = 0
    for name, shape in tensors:
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * _DTYPE.itemsize
        if offset + nbytes > len(data):
            raise ConfigurationError(f"{path}: tensor data for {name} is truncated")
        values = np.frombuffer(data, dtype=_DTYPE, count=count, offset=offset)
        params[name] = values.astype(np.float64).reshape(shape)
        offset += nbytes
    if offset != len(data):
        raise ConfigurationError(f"{path}: {len(data) - offset} trailing bytes after tensors")

    template = init_model(
        featurizer,
        pooling=pooling,
        binning=binning,
        hidden_dim=int(header["hidden_dim"]),
        seed=seed,
        uses_embeddings=bool(header.get("uses_embeddings", False)),
    )
    if template.input_dim != int(header["input_dim"]):
        raise ConfigurationError(
            f"{path}: header input_dim {header['input_dim']} does not match "
            f"{pooling.value} pooling of dim {featurizer.dim}"
        )
    return template.with_parameters(params)
