"""Word-to-phoneme upsampling and the proxy prosody task.

The downstream acoustic model is out of scope, so training optimizes a
stand-in objective with the same composition: a per-word logistic head on
the syntactic features predicts prosodic breaks generated by a fixed rule
on the tree, and the table-wide nuclear-norm term is added with weight
``nml_weight``. Phoneme-level features (syntactic rows copied once per
phoneme, concatenated with phoneme embeddings) are produced for export
exactly as a TTS encoder would consume them.
"""

import json
from dataclasses import dataclass, fields, replace

import numpy as np

from .encoder import (
    SyntacticFeatureSet,
    encode_backward,
    encode_sentence_with_cache,
)
from .errors import (
    CountMismatch,
    DimensionMismatch,
    EmptyCorpus,
    NonFiniteLoss,
    UnknownWord,
    ZeroCount,
)
from .model import ModelParameters, init_model
from .nml import nml_loss, nuclear_norm
from .numerics import make_rng
from .treebank import ConstituentTree, LabelVocabulary, TreeNode, build_vocabulary


def upsample(features: SyntacticFeatureSet, counts) -> np.ndarray:
    """Repeat word i's feature row counts[i] times, in word order.

    Rows are copied bit for bit; the output has sum(counts) rows.
    """
    counts = [int(c) for c in counts]
    if len(counts) != features.word_count:
        raise CountMismatch(
            f"{len(counts)} counts for {features.word_count} words"
        )
    if any(c < 1 for c in counts):
        raise ZeroCount("every word needs at least one phoneme")
    return np.repeat(features.per_word, counts, axis=0)


class Lexicon:
    """Word-to-phoneme mapping with a stable phoneme-id assignment.

    The phoneme inventory is the first-occurrence order of phonemes over
    the entries. With policy ``strict`` an unmapped word is an error;
    with ``fallback`` it resolves to one phoneme per grapheme (those
    graphemes must still be in the inventory to be embeddable).
    """

    POLICIES = ("strict", "fallback")

    def __init__(self, entries, policy: str = "strict"):
        if policy not in self.POLICIES:
            raise ValueError(f"policy must be one of {self.POLICIES}, got {policy!r}")
        self.policy = policy
        self._entries: dict[str, tuple[str, ...]] = {}
        inventory: dict[str, None] = {}
        for word, phs in dict(entries).items():
            phs = tuple(phs)
            if not phs:
                raise ValueError(f"word {word!r} maps to no phonemes")
            self._entries[word] = phs
            for ph in phs:
                inventory.setdefault(ph, None)
        self._phonemes = tuple(inventory)
        self._ids = {ph: i for i, ph in enumerate(self._phonemes)}

    @property
    def phonemes(self) -> tuple[str, ...]:
        return self._phonemes

    def phonemes_for(self, word: str) -> tuple[str, ...]:
        seq = self._entries.get(word)
        if seq is not None:
            return seq
        if self.policy == "fallback":
            return tuple(word)
        raise UnknownWord(f"word {word!r} not in lexicon")

    def phoneme_ids_for(self, word: str) -> list[int]:
        ids = []
        for ph in self.phonemes_for(word):
            if ph not in self._ids:
                raise UnknownWord(
                    f"fallback phoneme {ph!r} of word {word!r} not in inventory"
                )
            ids.append(self._ids[ph])
        return ids

    @classmethod
    def graphemic(cls, words, policy: str = "fallback") -> "Lexicon":
        """One phoneme per character, for corpora without pronunciations."""
        return cls({w: tuple(w) for w in words}, policy=policy)

    @classmethod
    def from_file(cls, path, policy: str = "strict") -> "Lexicon":
        """Read ``word PH PH ...`` lines; blanks and '#' comments skipped."""
        entries: dict[str, tuple[str, ...]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                parts = stripped.split()
                if len(parts) < 2:
                    raise ValueError(f"{path}:{lineno}: need a word and phonemes")
                entries[parts[0]] = tuple(parts[1:])
        return cls(entries, policy=policy)


@dataclass(frozen=True)
class PhonemeLevelFeatures:
    """Upsampled syntactic rows joined with phoneme embeddings.

    ``rows`` is (P, 2*d_hid + d_ph); phonemes of the same word share an
    identical syntactic half.
    """

    rows: np.ndarray
    phonemes: tuple[str, ...]
    counts: tuple[int, ...]


def make_phoneme_level(
    features: SyntacticFeatureSet, words, lexicon: Lexicon, phoneme_table: np.ndarray
) -> PhonemeLevelFeatures:
    """Expand word features to phoneme level and attach phoneme embeddings.

    ``phoneme_table`` rows must follow the lexicon's phoneme-id order.
    """
    phoneme_table = np.asarray(phoneme_table, dtype=np.float64)
    if phoneme_table.ndim != 2 or phoneme_table.shape[0] != len(lexicon.phonemes):
        raise DimensionMismatch(
            f"phoneme table has {phoneme_table.shape[0]} rows for "
            f"{len(lexicon.phonemes)} phonemes"
        )
    words = list(words)
    id_runs = [lexicon.phoneme_ids_for(w) for w in words]
    counts = tuple(len(run) for run in id_runs)
    syntactic = upsample(features, counts)
    flat_ids = [i for run in id_runs for i in run]
    rows = np.concatenate([syntactic, phoneme_table[flat_ids]], axis=1)
    flat_phonemes = tuple(ph for w in words for ph in lexicon.phonemes_for(w))
    return PhonemeLevelFeatures(rows, flat_phonemes, counts)


def oracle_breaks(tree: ConstituentTree) -> np.ndarray:
    """Reference break labels: 1 after the last word of each root child.

    The final word always carries a break (sentence end).
    """
    w = len(tree.words())
    labels = np.zeros(w, dtype=np.int64)
    root = tree.root
    if not root.is_preterminal():
        offset = 0
        for child in root.children:
            span = _leaf_count(child)
            labels[offset + span - 1] = 1
            offset += span
    labels[w - 1] = 1
    return labels


def _leaf_count(node: TreeNode) -> int:
    if node.is_leaf():
        return 1
    return sum(_leaf_count(c) for c in node.children)


@dataclass(frozen=True)
class TrainConfig:
    """Training settings; field names match the JSON config keys except
    for ``lambda``, which maps to ``nml_weight``."""

    nml_weight: float = 0.05
    learning_rate: float = 1e-3
    epochs: int = 50
    seed: int = 42
    d_emb: int = 32
    d_hid: int = 64
    d_ph: int = 16

    _JSON_KEYS = {
        "lambda": "nml_weight",
        "learning_rate": "learning_rate",
        "epochs": "epochs",
        "seed": "seed",
        "d_emb": "d_emb",
        "d_hid": "d_hid",
        "d_ph": "d_ph",
    }

    @classmethod
    def from_dict(cls, raw: dict) -> "TrainConfig":
        kwargs = {}
        for key, value in raw.items():
            if key not in cls._JSON_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[cls._JSON_KEYS[key]] = value
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "TrainConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        return cls.from_dict(raw)

    def override(self, **kwargs) -> "TrainConfig":
        present = {f.name for f in fields(self)}
        updates = {k: v for k, v in kwargs.items() if v is not None}
        unknown = set(updates) - present
        if unknown:
            raise ValueError(f"unknown config overrides: {sorted(unknown)}")
        return replace(self, **updates)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    task_loss: float
    nml_loss: float
    nuclear_norm: float
    total_loss: float


@dataclass
class TrainingLog:
    entries: list[EpochStats]

    def final(self) -> EpochStats:
        return self.entries[-1]


@dataclass
class TrainResult:
    model: ModelParameters
    vocab: LabelVocabulary
    log: TrainingLog


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    loss: float
    word_count: int


def _softplus(x):
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _head_forward(model: ModelParameters, per_word: np.ndarray):
    logits = per_word @ model.head_weights + model.head_bias
    return logits, 1.0 / (1.0 + np.exp(-logits))


def _sentence_task_loss(logits: np.ndarray, targets: np.ndarray) -> float:
    # Mean per-word logistic loss: softplus(s) - y*s.
    return float(np.mean(_softplus(logits) - targets * logits))


def train(corpus, config: TrainConfig, lexicon: Lexicon | None = None) -> TrainResult:
    """Stochastic gradient descent over (tree, words) pairs.

    Each epoch visits every sentence once in a freshly shuffled, seeded
    order and applies one plain SGD update per sentence on

        task loss + nml_weight * nuclear-norm loss.

    End-of-epoch losses are measured with a separate no-update pass, so
    each log entry satisfies total = task + nml_weight * nml exactly.
    """
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    trees = []
    for tree, words in corpus:
        assert list(words) == tree.words(), "corpus words disagree with tree leaves"
        trees.append(tree)

    vocab = build_vocabulary(trees)
    rng = make_rng(config.seed)
    model = init_model(
        rng,
        vocab_size=len(vocab),
        d_emb=config.d_emb,
        d_hid=config.d_hid,
        d_ph=config.d_ph,
        phonemes=lexicon.phonemes if lexicon is not None else (),
    )
    targets = [oracle_breaks(t).astype(np.float64) for t in trees]

    entries = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(trees))
        for si in order:
            _sgd_step(model, trees[si], targets[si], vocab, config)
        entries.append(_epoch_stats(epoch, model, trees, targets, vocab, config))
    return TrainResult(model, vocab, TrainingLog(entries))


def _sgd_step(model, tree, target, vocab, config: TrainConfig) -> None:
    features, cache = encode_sentence_with_cache(model, tree, vocab)
    logits, probs = _head_forward(model, features.per_word)
    task = _sentence_task_loss(logits, target)
    if not np.isfinite(task):
        raise NonFiniteLoss(f"task loss diverged to {task}")

    d_logits = (probs - target) / target.size
    grad_head_w = features.per_word.T @ d_logits
    grad_head_b = float(d_logits.sum())
    grad_features = np.outer(d_logits, model.head_weights)
    enc = encode_backward(model, cache, grad_features)

    grad_table = enc.embedding
    if config.nml_weight != 0.0:
        grad_table = grad_table + config.nml_weight * nml_loss(model.embedding).grad_table

    lr = config.learning_rate
    model.embedding.weights -= lr * grad_table
    for name, block in model.gru_left.blocks().items():
        block -= lr * enc.gru_left.blocks()[name]
    for name, block in model.gru_right.blocks().items():
        block -= lr * enc.gru_right.blocks()[name]
    model.head_weights -= lr * grad_head_w
    model.head_bias -= lr * grad_head_b


def _epoch_stats(epoch, model, trees, targets, vocab, config) -> EpochStats:
    task = _mean_task_loss(model, trees, targets, vocab)
    nml = nml_loss(model.embedding)
    total = task + config.nml_weight * nml.loss
    return EpochStats(
        epoch=epoch,
        task_loss=task,
        nml_loss=nml.loss,
        nuclear_norm=float(nml.singular_values.sum()),
        total_loss=total,
    )


def _mean_task_loss(model, trees, targets, vocab) -> float:
    losses = []
    for tree, target in zip(trees, targets):
        features, _ = encode_sentence_with_cache(model, tree, vocab)
        logits, _ = _head_forward(model, features.per_word)
        losses.append(_sentence_task_loss(logits, target))
    return float(np.mean(losses))


def evaluate(model: ModelParameters, vocab: LabelVocabulary, corpus) -> EvalMetrics:
    """Break-prediction accuracy and mean task loss; no updates.

    A word is predicted as a break iff its head probability exceeds 0.5
    (exactly 0.5 predicts no break).
    """
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("cannot evaluate on an empty corpus")
    hits = 0
    total = 0
    losses = []
    for tree, _ in corpus:
        target = oracle_breaks(tree)
        features, _ = encode_sentence_with_cache(model, tree, vocab)
        logits, probs = _head_forward(model, features.per_word)
        predicted = (probs > 0.5).astype(np.int64)
        hits += int((predicted == target).sum())
        total += target.size
        losses.append(_sentence_task_loss(logits, target.astype(np.float64)))
    return EvalMetrics(
        accuracy=hits / total, loss=float(np.mean(losses)), word_count=total
    )


def majority_class_rate(corpus) -> float:
    """Accuracy of always predicting the corpus-wide majority break label."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("empty corpus")
    ones = 0
    total = 0
    for tree, _ in corpus:
        target = oracle_breaks(tree)
        ones += int(target.sum())
        total += target.size
    return max(ones, total - ones) / total


def corpus_from_trees(trees) -> list[tuple[ConstituentTree, list[str]]]:
    """Pair each tree with its word sequence, the shape train() expects."""
    return [(t, t.words()) for t in trees]
