"""Brute-force measurement of traversal ambiguity.

A single traversal maps some distinct trees to the same label sequence;
the traversal pair separates more of them. This module enumerates every
tree in a small family and counts collision classes under the left-only
key versus the (left, right) pair key. Keys include the per-word position
vectors, since the encoder consumes positions as well as labels.
"""

import itertools
from dataclasses import dataclass

from .errors import SearchSpaceTooLarge
from .linearizer import linearize_pair
from .treebank import ConstituentTree, LabelVocabulary, TreeNode, internal, leaf

#: Enumeration is refused when the family would exceed this many trees.
MAX_TREES = 1_000_000

_FIELD_BOUNDS = {"words": 6, "max_children": 3, "labels": 3, "max_unary": 3}


@dataclass(frozen=True)
class EnumerationSpec:
    """Family of trees to enumerate.

    ``words`` is the exact leaf count; every leaf sits under a unary
    preterminal labeled ``preterminal``. Non-preterminal nodes take any
    label from ``labels``; at most ``max_unary`` of them may stack as a
    unary chain above any node.
    """

    words: int
    labels: tuple[str, ...]
    preterminal: str = "P"
    max_children: int = 3
    max_unary: int = 1

    def validate(self) -> None:
        if not 1 <= self.words <= _FIELD_BOUNDS["words"]:
            raise SearchSpaceTooLarge(
                f"words must be in [1, {_FIELD_BOUNDS['words']}], got {self.words}"
            )
        if not 1 <= self.max_children <= _FIELD_BOUNDS["max_children"]:
            raise SearchSpaceTooLarge(
                f"max_children must be in [1, {_FIELD_BOUNDS['max_children']}]"
            )
        if not 1 <= len(self.labels) <= _FIELD_BOUNDS["labels"]:
            raise SearchSpaceTooLarge("need 1..3 non-preterminal labels")
        if not 0 <= self.max_unary <= _FIELD_BOUNDS["max_unary"]:
            raise SearchSpaceTooLarge("max_unary must be in [0, 3]")
        if self.preterminal in self.labels:
            raise ValueError("preterminal symbol must not be a phrase label")
        total = count_trees(self)
        if total > MAX_TREES:
            raise SearchSpaceTooLarge(f"family holds {total} trees > {MAX_TREES}")


def count_trees(spec: EnumerationSpec) -> int:
    """Family size without materializing it."""
    n_labels = len(spec.labels)
    # Each tree of span s is a base tree (preterminal, or branching node
    # with 2+ children) under 0..max_unary labeled unary wrappers.
    chain_factor = sum(n_labels**d for d in range(spec.max_unary + 1))
    memo: dict[int, int] = {}

    def total(span: int) -> int:
        if span not in memo:
            memo[span] = base(span) * chain_factor
        return memo[span]

    def base(span: int) -> int:
        if span == 1:
            return 1
        count = 0
        for k in range(2, min(spec.max_children, span) + 1):
            for comp in _compositions(span, k):
                product = 1
                for part in comp:
                    product *= total(part)
                count += product * n_labels
        return count

    return total(spec.words)


def _compositions(n: int, k: int):
    # Ordered splits of n into k positive parts.
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first, *rest)


def enumerate_trees(spec: EnumerationSpec) -> list[ConstituentTree]:
    """Every tree in the family, in a deterministic order, no duplicates."""
    spec.validate()

    def subtrees(span: int, start: int) -> list[TreeNode]:
        out = list(_base_subtrees(span, start))
        layer = out
        for _ in range(spec.max_unary):
            layer = [internal(lab, (t,)) for t in layer for lab in spec.labels]
            out.extend(layer)
        return out

    def _base_subtrees(span: int, start: int):
        if span == 1:
            yield internal(spec.preterminal, (leaf(f"w{start + 1}"),))
            return
        for k in range(2, min(spec.max_children, span) + 1):
            for comp in _compositions(span, k):
                offsets = [start]
                for part in comp[:-1]:
                    offsets.append(offsets[-1] + part)
                child_choices = [
                    subtrees(part, off) for part, off in zip(comp, offsets)
                ]
                for children in itertools.product(*child_choices):
                    for lab in spec.labels:
                        yield internal(lab, children)

    trees = [ConstituentTree(root) for root in subtrees(spec.words, 0)]
    assert len(trees) == count_trees(spec)
    return trees


@dataclass(frozen=True)
class CollisionReport:
    tree_count: int
    distinct_left_sequences: int
    distinct_pairs: int
    left_collision_classes: int
    pair_collision_classes: int

    def to_dict(self) -> dict:
        return {
            "tree_count": self.tree_count,
            "distinct_left_sequences": self.distinct_left_sequences,
            "distinct_pairs": self.distinct_pairs,
            "left_collision_classes": self.left_collision_classes,
            "pair_collision_classes": self.pair_collision_classes,
        }


def _keys(tree: ConstituentTree, vocab: LabelVocabulary):
    pair = linearize_pair(tree, vocab)
    left_key = (pair.left.label_ids, pair.left.word_positions)
    right_key = (pair.right.label_ids, pair.right.word_positions)
    return left_key, (left_key, right_key)


def collision_report(trees, vocab: LabelVocabulary) -> CollisionReport:
    """Group trees by left key and by pair key, count collision classes."""
    trees = list(trees)
    left_classes: dict = {}
    pair_classes: dict = {}
    for tree in trees:
        left_key, pair_key = _keys(tree, vocab)
        left_classes[left_key] = left_classes.get(left_key, 0) + 1
        pair_classes[pair_key] = pair_classes.get(pair_key, 0) + 1
    return CollisionReport(
        tree_count=len(trees),
        distinct_left_sequences=len(left_classes),
        distinct_pairs=len(pair_classes),
        left_collision_classes=sum(1 for c in left_classes.values() if c >= 2),
        pair_collision_classes=sum(1 for c in pair_classes.values() if c >= 2),
    )


def collision_witness(
    trees, vocab: LabelVocabulary
) -> tuple[ConstituentTree, ConstituentTree] | None:
    """First pair of trees the left key conflates but the pair key splits."""
    by_left: dict = {}
    for tree in trees:
        left_key, pair_key = _keys(tree, vocab)
        for other_pair_key, other_tree in by_left.get(left_key, []):
            if other_pair_key != pair_key:
                return other_tree, tree
        by_left.setdefault(left_key, []).append((pair_key, tree))
    return None
