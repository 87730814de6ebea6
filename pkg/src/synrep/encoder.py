"""Shared label embedding, twin uni-directional GRUs, per-word features.

The two label sequences of a sentence share one embedding table but are
consumed by two GRUs with separate parameters. A word's feature vector is
the concatenation of the left GRU's state at the word's position in the
left sequence with the right GRU's state at its position in the right
sequence, giving a 2*d_hid vector per word.

Gate convention (fixed here; finite-difference tests depend on it):

    z_t = logistic(W_z x_t + U_z h_{t-1} + b_z)
    r_t = logistic(W_r x_t + U_r h_{t-1} + b_r)
    g_t = tanh(W_h x_t + U_h (r_t * h_{t-1}) + b_h)
    h_t = (1 - z_t) * h_{t-1} + z_t * g_t
"""

from dataclasses import dataclass

import numpy as np

from .errors import CacheMismatch, DimensionMismatch, IdOutOfRange
from .linearizer import LinearizationPair, linearize_pair

#: Half-width of the uniform initialization for all trained weights.
INIT_SCALE = 0.08


def _logistic(x):
    return 1.0 / (1.0 + np.exp(-x))


@dataclass
class EmbeddingTable:
    """Dense lookup table; row i embeds label id i."""

    weights: np.ndarray  # (size, dim)

    @classmethod
    def init(cls, rng: np.random.Generator, size: int, dim: int) -> "EmbeddingTable":
        return cls(rng.uniform(-INIT_SCALE, INIT_SCALE, size=(size, dim)))

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def embed_sequence(table: EmbeddingTable, ids) -> np.ndarray:
    """Stack the table rows named by ``ids`` into an (m, dim) matrix."""
    ids = np.asarray(ids, dtype=np.intp)
    if ids.size == 0:
        return np.zeros((0, table.dim))
    if ids.min() < 0 or ids.max() >= table.size:
        raise IdOutOfRange(
            f"label id outside [0, {table.size}): {ids.min()}..{ids.max()}"
        )
    return table.weights[ids]


@dataclass
class GruParameters:
    """One GRU's weights; also reused as the container for their gradients."""

    W_z: np.ndarray
    W_r: np.ndarray
    W_h: np.ndarray  # (d_hid, d_in)
    U_z: np.ndarray
    U_r: np.ndarray
    U_h: np.ndarray  # (d_hid, d_hid)
    b_z: np.ndarray
    b_r: np.ndarray
    b_h: np.ndarray  # (d_hid,)

    @classmethod
    def init(cls, rng: np.random.Generator, d_in: int, d_hid: int) -> "GruParameters":
        def w(rows, cols):
            return rng.uniform(-INIT_SCALE, INIT_SCALE, size=(rows, cols))

        return cls(
            W_z=w(d_hid, d_in), W_r=w(d_hid, d_in), W_h=w(d_hid, d_in),
            U_z=w(d_hid, d_hid), U_r=w(d_hid, d_hid), U_h=w(d_hid, d_hid),
            b_z=np.zeros(d_hid), b_r=np.zeros(d_hid), b_h=np.zeros(d_hid),
        )

    @classmethod
    def zeros_like(cls, other: "GruParameters") -> "GruParameters":
        d_hid, d_in = other.W_z.shape
        return cls(
            W_z=np.zeros((d_hid, d_in)), W_r=np.zeros((d_hid, d_in)),
            W_h=np.zeros((d_hid, d_in)), U_z=np.zeros((d_hid, d_hid)),
            U_r=np.zeros((d_hid, d_hid)), U_h=np.zeros((d_hid, d_hid)),
            b_z=np.zeros(d_hid), b_r=np.zeros(d_hid), b_h=np.zeros(d_hid),
        )

    @property
    def d_in(self) -> int:
        return self.W_z.shape[1]

    @property
    def d_hid(self) -> int:
        return self.W_z.shape[0]

    def blocks(self) -> dict[str, np.ndarray]:
        return {
            "W_z": self.W_z, "W_r": self.W_r, "W_h": self.W_h,
            "U_z": self.U_z, "U_r": self.U_r, "U_h": self.U_h,
            "b_z": self.b_z, "b_r": self.b_r, "b_h": self.b_h,
        }


@dataclass
class GruCache:
    """Intermediates of one forward call, consumed by gru_backward."""

    params: GruParameters
    inputs: np.ndarray
    h0: np.ndarray
    update: np.ndarray     # z_t rows
    reset: np.ndarray      # r_t rows
    candidate: np.ndarray  # g_t rows
    states: np.ndarray     # h_t rows


def gru_forward(params: GruParameters, inputs, h0) -> tuple[np.ndarray, GruCache]:
    """Run the GRU over ``inputs`` (m, d_in) from initial state ``h0``.

    Returns the (m, d_hid) state matrix and the cache for the backward
    pass. An empty input yields an empty state matrix.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    h0 = np.asarray(h0, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != params.d_in:
        raise DimensionMismatch(
            f"inputs must be (m, {params.d_in}), got {inputs.shape}"
        )
    if h0.shape != (params.d_hid,):
        raise DimensionMismatch(f"h0 must be ({params.d_hid},), got {h0.shape}")

    m = inputs.shape[0]
    d = params.d_hid
    update = np.empty((m, d))
    reset = np.empty((m, d))
    candidate = np.empty((m, d))
    states = np.empty((m, d))

    h = h0
    for t in range(m):
        x = inputs[t]
        z = _logistic(params.W_z @ x + params.U_z @ h + params.b_z)
        r = _logistic(params.W_r @ x + params.U_r @ h + params.b_r)
        g = np.tanh(params.W_h @ x + params.U_h @ (r * h) + params.b_h)
        h = (1.0 - z) * h + z * g
        update[t] = z
        reset[t] = r
        candidate[t] = g
        states[t] = h

    cache = GruCache(params, inputs, h0, update, reset, candidate, states)
    return states, cache


def gru_backward(
    cache: GruCache, grad_states
) -> tuple[GruParameters, np.ndarray, np.ndarray]:
    """Backpropagate dL/dh_t for all t through one forward call.

    Returns (parameter gradients, input gradients (m, d_in), gradient of
    the initial state).
    """
    grad_states = np.asarray(grad_states, dtype=np.float64)
    if grad_states.shape != cache.states.shape:
        raise CacheMismatch(
            f"grad_states {grad_states.shape} does not match cached "
            f"states {cache.states.shape}"
        )
    p = cache.params
    m = cache.inputs.shape[0]
    grads = GruParameters.zeros_like(p)
    grad_inputs = np.zeros_like(cache.inputs)

    carry = np.zeros(p.d_hid)
    for t in range(m - 1, -1, -1):
        h_prev = cache.states[t - 1] if t > 0 else cache.h0
        z = cache.update[t]
        r = cache.reset[t]
        g = cache.candidate[t]
        x = cache.inputs[t]

        dh = grad_states[t] + carry
        d_gate_g = dh * z * (1.0 - g * g)
        d_rh = p.U_h.T @ d_gate_g  # gradient at r * h_prev
        d_gate_r = d_rh * h_prev * r * (1.0 - r)
        d_gate_z = dh * (g - h_prev) * z * (1.0 - z)

        grads.W_z += np.outer(d_gate_z, x)
        grads.W_r += np.outer(d_gate_r, x)
        grads.W_h += np.outer(d_gate_g, x)
        grads.U_z += np.outer(d_gate_z, h_prev)
        grads.U_r += np.outer(d_gate_r, h_prev)
        grads.U_h += np.outer(d_gate_g, r * h_prev)
        grads.b_z += d_gate_z
        grads.b_r += d_gate_r
        grads.b_h += d_gate_g

        grad_inputs[t] = p.W_z.T @ d_gate_z + p.W_r.T @ d_gate_r + p.W_h.T @ d_gate_g
        carry = (
            dh * (1.0 - z)
            + p.U_z.T @ d_gate_z
            + p.U_r.T @ d_gate_r
            + d_rh * r
        )
    return grads, grad_inputs, carry


@dataclass(frozen=True)
class SyntacticFeatureSet:
    """Per-word feature rows; row i belongs to sentence word i."""

    per_word: np.ndarray  # (w, 2 * d_hid)

    @property
    def word_count(self) -> int:
        return self.per_word.shape[0]

    @property
    def width(self) -> int:
        return self.per_word.shape[1]


def extract_features(
    states_left: np.ndarray, states_right: np.ndarray, pair: LinearizationPair
) -> SyntacticFeatureSet:
    """Concatenate each word's anchored state rows from both traversals."""
    states_left = np.asarray(states_left, dtype=np.float64)
    states_right = np.asarray(states_right, dtype=np.float64)
    if states_left.shape[0] != pair.left.length:
        raise DimensionMismatch(
            f"left states have {states_left.shape[0]} rows, sequence length "
            f"is {pair.left.length}"
        )
    if states_right.shape[0] != pair.right.length:
        raise DimensionMismatch(
            f"right states have {states_right.shape[0]} rows, sequence length "
            f"is {pair.right.length}"
        )
    lpos = np.asarray(pair.left.word_positions, dtype=np.intp)
    rpos = np.asarray(pair.right.word_positions, dtype=np.intp)
    for pos, rows in ((lpos, states_left), (rpos, states_right)):
        if pos.size and (pos.min() < 0 or pos.max() >= rows.shape[0]):
            raise DimensionMismatch(
                f"word position outside [0, {rows.shape[0]})"
            )
    per_word = np.concatenate([states_left[lpos], states_right[rpos]], axis=1)
    return SyntacticFeatureSet(per_word)


@dataclass
class EncodeCache:
    """Everything needed to backpropagate through encode_sentence."""

    pair: LinearizationPair
    left: GruCache
    right: GruCache


@dataclass
class EncoderGradients:
    embedding: np.ndarray  # same shape as the table weights
    gru_left: GruParameters
    gru_right: GruParameters


def encode_sentence(model, tree, vocab) -> SyntacticFeatureSet:
    """Full forward pass of the representation network for one sentence."""
    features, _ = encode_sentence_with_cache(model, tree, vocab)
    return features


def encode_sentence_with_cache(model, tree, vocab):
    pair = linearize_pair(tree, vocab)
    x_left = embed_sequence(model.embedding, pair.left.label_ids)
    x_right = embed_sequence(model.embedding, pair.right.label_ids)
    h0 = np.zeros(model.gru_left.d_hid)
    states_left, cache_left = gru_forward(model.gru_left, x_left, h0)
    states_right, cache_right = gru_forward(model.gru_right, x_right, h0)
    features = extract_features(states_left, states_right, pair)
    return features, EncodeCache(pair, cache_left, cache_right)


def encode_backward(model, cache: EncodeCache, grad_features) -> EncoderGradients:
    """Push dL/df_i back to the embedding table and both GRUs."""
    grad_features = np.asarray(grad_features, dtype=np.float64)
    d_hid = model.gru_left.d_hid
    w = cache.pair.word_count
    if grad_features.shape != (w, 2 * d_hid):
        raise DimensionMismatch(
            f"grad_features must be ({w}, {2 * d_hid}), got {grad_features.shape}"
        )
    # Word positions are distinct within a traversal, so plain assignment
    # scatters without clobbering.
    d_states_left = np.zeros((cache.pair.left.length, d_hid))
    d_states_right = np.zeros((cache.pair.right.length, d_hid))
    lpos = np.asarray(cache.pair.left.word_positions, dtype=np.intp)
    rpos = np.asarray(cache.pair.right.word_positions, dtype=np.intp)
    d_states_left[lpos] = grad_features[:, :d_hid]
    d_states_right[rpos] = grad_features[:, d_hid:]

    grads_left, d_x_left, _ = gru_backward(cache.left, d_states_left)
    grads_right, d_x_right, _ = gru_backward(cache.right, d_states_right)

    grad_table = np.zeros_like(model.embedding.weights)
    np.add.at(grad_table, np.asarray(cache.pair.left.label_ids, dtype=np.intp), d_x_left)
    np.add.at(grad_table, np.asarray(cache.pair.right.label_ids, dtype=np.intp), d_x_right)
    return EncoderGradients(grad_table, grads_left, grads_right)
