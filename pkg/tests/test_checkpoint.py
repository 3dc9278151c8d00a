import json

import numpy as np
import pytest

from common.errors import ConfigurationError
from schemas.schemas import PoolingMode
from tests.conftest import make_tiny_model
from tinynet.checkpoint import FORMAT_TAG, load_checkpoint, save_checkpoint
from tinynet.model import PARAM_NAMES, predict_logits


def test_checkpoint_round_trip_is_bitwise(tmp_path, tiny_model, tiny_batch):
    path = tmp_path / "model.ckpt"
    save_checkpoint(tiny_model, path)
    loaded = load_checkpoint(path)

    for name in PARAM_NAMES:
        assert np.array_equal(loaded.parameters()[name], tiny_model.parameters()[name])
    before = predict_logits(tiny_model, tiny_batch.features)
    after = predict_logits(loaded, tiny_batch.features)
    assert np.array_equal(before[0], after[0])
    assert np.array_equal(before[1], after[1])
    assert loaded.featurizer == tiny_model.featurizer
    assert loaded.pooling is tiny_model.pooling
    assert loaded.binning is tiny_model.binning


def test_checkpoint_header(tmp_path):
    model = make_tiny_model(dim=16, hidden=3, pooling=PoolingMode.FILLER_ONLY)
    path = tmp_path / "model.ckpt"
    save_checkpoint(model, path)
    tag, header, _ = path.read_bytes().split(b"\n", 2)
    assert tag.decode() == FORMAT_TAG
    header = json.loads(header)
    assert header["input_dim"] == 16
    assert header["hidden_dim"] == 3
    assert header["pooling"] == "filler_only"
    assert [name for name, _ in header["tensors"]] == list(PARAM_NAMES)


def test_checkpoint_is_deterministic(tmp_path):
    save_checkpoint(make_tiny_model(seed=5), tmp_path / "a.ckpt")
    save_checkpoint(make_tiny_model(seed=5), tmp_path / "b.ckpt")
    assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()


def test_checkpoint_errors(tmp_path, tiny_model):
    with pytest.raises(FileNotFoundError):
        load_checkpoint(tmp_path / "missing.ckpt")

    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"SOMETHING-ELSE\n{}\n")
    with pytest.raises(ConfigurationError):
        load_checkpoint(bad)

    path = tmp_path / "model.ckpt"
    save_checkpoint(tiny_model, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ConfigurationError):
        load_checkpoint(path)

    save_checkpoint(tiny_model, path)
    path.write_bytes(path.read_bytes() + b"\x00" * 8)
    with pytest.raises(ConfigurationError):
        load_checkpoint(path)
