"""Trainable parameter bundle and its versioned JSON checkpoint format."""

import json
from dataclasses import dataclass

import numpy as np

from .encoder import INIT_SCALE, EmbeddingTable, GruParameters
from .errors import CheckpointError
from .treebank import LabelVocabulary

CHECKPOINT_VERSION = 1

#: Half-width of the uniform init for the proxy head. The encoder weights
#: start at 0.08 (see encoder.INIT_SCALE), which makes early features
#: small; a unit-scale readout keeps their gradient signal large enough
#: for plain SGD at the fixed 1e-3 learning rate to train the encoder.
HEAD_INIT_SCALE = 1.0


@dataclass
class ModelParameters:
    """All trained state: shared embedding, both GRUs, proxy head, phonemes.

    The phoneme table rows follow the order of ``phonemes``; it is empty
    when the model was built without a lexicon.
    """

    embedding: EmbeddingTable
    gru_left: GruParameters
    gru_right: GruParameters
    head_weights: np.ndarray  # (2 * d_hid,)
    head_bias: float
    phonemes: tuple[str, ...]
    phoneme_table: np.ndarray  # (len(phonemes), d_ph)

    @property
    def d_emb(self) -> int:
        return self.embedding.dim

    @property
    def d_hid(self) -> int:
        return self.gru_left.d_hid

    @property
    def d_ph(self) -> int:
        return self.phoneme_table.shape[1]


def init_model(
    rng: np.random.Generator,
    vocab_size: int,
    d_emb: int = 32,
    d_hid: int = 64,
    d_ph: int = 16,
    phonemes=(),
) -> ModelParameters:
    """Fresh model with small-uniform weights and zero biases.

    Draw order is fixed (embedding, left GRU, right GRU, head, phoneme
    table) so a seed pins every parameter.
    """
    embedding = EmbeddingTable.init(rng, vocab_size, d_emb)
    gru_left = GruParameters.init(rng, d_emb, d_hid)
    gru_right = GruParameters.init(rng, d_emb, d_hid)
    head_weights = rng.uniform(-HEAD_INIT_SCALE, HEAD_INIT_SCALE, size=2 * d_hid)
    phonemes = tuple(phonemes)
    phoneme_table = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(len(phonemes), d_ph))
    return ModelParameters(
        embedding=embedding,
        gru_left=gru_left,
        gru_right=gru_right,
        head_weights=head_weights,
        head_bias=0.0,
        phonemes=phonemes,
        phoneme_table=phoneme_table,
    )


def save_model(path, model: ModelParameters, vocab: LabelVocabulary) -> None:
    """Write the checkpoint as a single JSON document."""
    doc = {
        "format_version": CHECKPOINT_VERSION,
        "d_emb": model.d_emb,
        "d_hid": model.d_hid,
        "d_ph": model.d_ph,
        "labels": list(vocab.labels),
        "phonemes": list(model.phonemes),
        "embedding": model.embedding.weights.tolist(),
        "gru_left": {k: v.tolist() for k, v in model.gru_left.blocks().items()},
        "gru_right": {k: v.tolist() for k, v in model.gru_right.blocks().items()},
        "head_weights": model.head_weights.tolist(),
        "head_bias": model.head_bias,
        "phoneme_table": model.phoneme_table.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path) -> tuple[ModelParameters, LabelVocabulary]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise CheckpointError(f"{path}: not valid JSON ({err})") from err
    if not isinstance(doc, dict) or doc.get("format_version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version "
            f"{doc.get('format_version')!r}, expected {CHECKPOINT_VERSION}"
        )
    try:
        vocab = LabelVocabulary(doc["labels"])
        d_ph = int(doc["d_ph"])
        gru_left = _gru_from(doc["gru_left"])
        gru_right = _gru_from(doc["gru_right"])
        model = ModelParameters(
            embedding=EmbeddingTable(np.asarray(doc["embedding"], dtype=np.float64)),
            gru_left=gru_left,
            gru_right=gru_right,
            head_weights=np.asarray(doc["head_weights"], dtype=np.float64),
            head_bias=float(doc["head_bias"]),
            phonemes=tuple(doc["phonemes"]),
            phoneme_table=np.asarray(
                doc["phoneme_table"], dtype=np.float64
            ).reshape(len(doc["phonemes"]), d_ph),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise CheckpointError(f"{path}: malformed checkpoint ({err})") from err
    return model, vocab


def _gru_from(blocks: dict) -> GruParameters:
    return GruParameters(
        **{k: np.asarray(blocks[k], dtype=np.float64) for k in
           ("W_z", "W_r", "W_h", "U_z", "U_r", "U_h", "b_z", "b_r", "b_h")}
    )
