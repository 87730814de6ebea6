import numpy as np
import pytest

from synrep.errors import CheckpointError
from synrep.model import init_model, load_model, save_model
from synrep.numerics import make_rng
from synrep.treebank import LabelVocabulary


@pytest.fixture
def model_and_vocab():
    vocab = LabelVocabulary(["S", "NP", "VP", "P"])
    model = init_model(
        make_rng(5), len(vocab), d_emb=4, d_hid=3, d_ph=2, phonemes=("a", "b", "t")
    )
    return model, vocab


def test_init_is_seed_deterministic():
    a = init_model(make_rng(1), 5, d_emb=4, d_hid=3)
    b = init_model(make_rng(1), 5, d_emb=4, d_hid=3)
    assert np.array_equal(a.embedding.weights, b.embedding.weights)
    assert np.array_equal(a.gru_right.U_h, b.gru_right.U_h)
    assert np.array_equal(a.head_weights, b.head_weights)
    assert a.head_bias == 0.0


def test_checkpoint_round_trip(tmp_path, model_and_vocab):
    model, vocab = model_and_vocab
    path = tmp_path / "model.json"
    save_model(path, model, vocab)
    loaded, loaded_vocab = load_model(path)
    assert loaded_vocab == vocab
    assert loaded.phonemes == model.phonemes
    assert np.array_equal(loaded.embedding.weights, model.embedding.weights)
    for name, block in model.gru_left.blocks().items():
        assert np.array_equal(loaded.gru_left.blocks()[name], block)
    for name, block in model.gru_right.blocks().items():
        assert np.array_equal(loaded.gru_right.blocks()[name], block)
    assert np.array_equal(loaded.head_weights, model.head_weights)
    assert loaded.head_bias == model.head_bias
    assert np.array_equal(loaded.phoneme_table, model.phoneme_table)


def test_rejects_unknown_version(tmp_path, model_and_vocab):
    model, vocab = model_and_vocab
    path = tmp_path / "model.json"
    save_model(path, model, vocab)
    doc = path.read_text(encoding="utf-8").replace(
        '"format_version": 1', '"format_version": 2', 1
    )
    path.write_text(doc, encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_model(path)


def test_rejects_garbage(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("not json", encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_model(path)


def test_rejects_missing_field(tmp_path, model_and_vocab):
    model, vocab = model_and_vocab
    path = tmp_path / "model.json"
    save_model(path, model, vocab)
    import json

    doc = json.loads(path.read_text(encoding="utf-8"))
    del doc["gru_left"]
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_model(path)


def test_empty_phoneme_inventory(tmp_path):
    vocab = LabelVocabulary(["A", "P"])
    model = init_model(make_rng(2), len(vocab), d_emb=3, d_hid=2, d_ph=4)
    assert model.phoneme_table.shape == (0, 4)
    path = tmp_path / "model.json"
    save_model(path, model, vocab)
    loaded, _ = load_model(path)
    assert loaded.phoneme_table.shape == (0, 4)
    assert loaded.d_ph == 4
