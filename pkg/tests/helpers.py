"""Shared test utilities: independent oracles and small builders.

The oracles here deliberately avoid the implementation's code paths: the
traversal oracle is a pure functional recursion (the right-first case
goes through an explicit tree mirror), and the GRU oracle evaluates the
gate equations coordinate by coordinate in plain Python floats.
"""

import math

import numpy as np

from synrep.encoder import GruParameters
from synrep.model import init_model
from synrep.treebank import ConstituentTree, TreeNode, internal, leaf


def mirror(tree: ConstituentTree) -> ConstituentTree:
    """Reverse the child order at every node."""

    def flip(node: TreeNode) -> TreeNode:
        if node.is_leaf():
            return leaf(node.word)
        return internal(node.label, tuple(flip(c) for c in reversed(node.children)))

    return ConstituentTree(flip(tree.root))


def oracle_left(tree: ConstituentTree, vocab):
    """Left-first linearization built by functional composition."""

    def walk(node: TreeNode):
        labels = [vocab.index_of(node.label)]
        if node.is_preterminal():
            return labels, [0]
        positions = []
        for child in node.children:
            sub_labels, sub_positions = walk(child)
            positions.extend(p + len(labels) for p in sub_positions)
            labels.extend(sub_labels)
        return labels, positions

    labels, positions = walk(tree.root)
    return labels, positions


def oracle_right(tree: ConstituentTree, vocab):
    """Right-first linearization as the left-first walk of the mirror.

    Word j of the mirrored tree is word (w - 1 - j) of the original, so
    the mirror's positions are read back in reverse.
    """
    labels, mirror_positions = oracle_left(mirror(tree), vocab)
    return labels, list(reversed(mirror_positions))


def oracle_gru(params: GruParameters, inputs, h0):
    """Gate equations evaluated per coordinate in plain Python floats."""

    def sig(v):
        return 1.0 / (1.0 + math.exp(-v))

    d = params.d_hid
    h = [float(v) for v in h0]
    states = []
    for x in np.asarray(inputs, dtype=np.float64):
        z = [sig(_dot(params.W_z[j], x) + _dot(params.U_z[j], h) + params.b_z[j])
             for j in range(d)]
        r = [sig(_dot(params.W_r[j], x) + _dot(params.U_r[j], h) + params.b_r[j])
             for j in range(d)]
        rh = [r[j] * h[j] for j in range(d)]
        g = [math.tanh(_dot(params.W_h[j], x) + _dot(params.U_h[j], rh) + params.b_h[j])
             for j in range(d)]
        h = [(1.0 - z[j]) * h[j] + z[j] * g[j] for j in range(d)]
        states.append(list(h))
    return np.array(states).reshape(len(states), d)


def _dot(row, vec) -> float:
    return sum(float(a) * float(b) for a, b in zip(row, vec))


def small_model(rng, vocab_size, d_emb=3, d_hid=4, d_ph=2, phonemes=()):
    """Model small enough for exhaustive finite-difference checks."""
    return init_model(
        rng, vocab_size, d_emb=d_emb, d_hid=d_hid, d_ph=d_ph, phonemes=phonemes
    )
