"""Seeded random trees and corpora for tests, demos, and training runs.

Trees use a fixed 12-symbol vocabulary (7 phrase labels, 5 preterminals)
so corpora look like small treebank fragments. All randomness flows
through the caller's generator, making corpora reproducible bit for bit.
"""

import numpy as np

from .treebank import ConstituentTree, internal, leaf

PHRASE_LABELS = ("S", "NP", "VP", "PP", "ADJP", "ADVP", "SBAR")
PRETERMINAL_LABELS = ("DT", "NN", "VB", "JJ", "RB")

_ONSETS = ("b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v")
_VOWELS = ("a", "e", "i", "o", "u")

#: Chance that a multi-word constituent splits into sub-constituents
#: instead of staying flat; keeps most trees 2-3 phrase levels deep.
_NEST_PROB = 0.35


def random_word(rng: np.random.Generator) -> str:
    """A pronounceable CV(CV(CV)) word."""
    syllables = int(rng.integers(1, 4))
    return "".join(
        _ONSETS[rng.integers(len(_ONSETS))] + _VOWELS[rng.integers(len(_VOWELS))]
        for _ in range(syllables)
    )


def random_tree(
    rng: np.random.Generator,
    n_words: int,
    max_children: int = 3,
    words=None,
) -> ConstituentTree:
    """A random constituency tree over ``n_words`` words.

    The root splits the sentence into a few flat-ish constituents; deeper
    structure appears with decreasing probability so most trees are 2-3
    levels of phrase structure above the preterminals.
    """
    if n_words < 1:
        raise ValueError("need at least one word")
    if words is None:
        words = [random_word(rng) for _ in range(n_words)]
    else:
        words = list(words)
        assert len(words) == n_words
    if n_words == 1:
        node = _preterminal(rng, words[0])
        if rng.random() < 0.3:
            node = internal(_phrase(rng), (node,))
        return ConstituentTree(node)
    root_children = [
        _subtree(rng, chunk, max_children, depth=1)
        for chunk in _split(rng, words, max_children)
    ]
    return ConstituentTree(internal("S", root_children))


def _phrase(rng) -> str:
    return PHRASE_LABELS[rng.integers(len(PHRASE_LABELS))]


def _preterminal(rng, word: str):
    return internal(PRETERMINAL_LABELS[rng.integers(len(PRETERMINAL_LABELS))], (leaf(word),))


def _split(rng, words, max_children):
    # Cut the word list into 2..max_children contiguous non-empty chunks
    # (or one chunk when there is a single word).
    n = len(words)
    k = int(rng.integers(2, min(max_children, n) + 1)) if n > 1 else 1
    cuts = sorted(rng.choice(np.arange(1, n), size=k - 1, replace=False)) if k > 1 else []
    bounds = [0, *[int(c) for c in cuts], n]
    return [words[a:b] for a, b in zip(bounds, bounds[1:])]


def _subtree(rng, words, max_children, depth):
    if len(words) == 1:
        node = _preterminal(rng, words[0])
        if depth <= 1 and rng.random() < 0.5:
            node = internal(_phrase(rng), (node,))
        return node
    go_deeper = depth < 3 and rng.random() < _NEST_PROB
    if go_deeper:
        children = [
            _subtree(rng, chunk, max_children, depth + 1)
            for chunk in _split(rng, words, max_children)
        ]
    else:
        children = [_preterminal(rng, w) for w in words]
    return internal(_phrase(rng), children)


def random_corpus(
    rng: np.random.Generator,
    size: int,
    min_words: int = 2,
    max_words: int = 8,
    max_children: int = 3,
) -> list[ConstituentTree]:
    return [
        random_tree(rng, int(rng.integers(min_words, max_words + 1)), max_children)
        for _ in range(size)
    ]
