"""Depth-first linearization of a tree into two constituent-label sequences.

The left-first walk visits children left to right, the right-first walk
right to left; both emit each internal node's label id on entry and emit
nothing at leaves. A word's position in a sequence is the emission index
of its preterminal, which is the unique element owned by that word.
"""

from dataclasses import dataclass

from .treebank import ConstituentTree, LabelVocabulary, TreeNode


@dataclass(frozen=True)
class Linearization:
    """One traversal's label-id sequence plus per-word anchor positions.

    ``word_positions[i]`` is the index into ``label_ids`` of word i's
    preterminal emission, with words counted left to right in the
    sentence regardless of traversal direction.
    """

    label_ids: tuple[int, ...]
    word_positions: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.label_ids)

    @property
    def word_count(self) -> int:
        return len(self.word_positions)


@dataclass(frozen=True)
class LinearizationPair:
    left: Linearization
    right: Linearization

    @property
    def word_count(self) -> int:
        return self.left.word_count


def linearize_left(tree: ConstituentTree, vocab: LabelVocabulary) -> Linearization:
    """Pre-order walk, children left to right."""
    return _linearize(tree.root, vocab, right_first=False)


def linearize_right(tree: ConstituentTree, vocab: LabelVocabulary) -> Linearization:
    """Pre-order walk, children right to left."""
    return _linearize(tree.root, vocab, right_first=True)


def _linearize(root: TreeNode, vocab: LabelVocabulary, right_first: bool) -> Linearization:
    labels: list[int] = []
    visit_positions: list[int] = []

    def visit(node: TreeNode) -> None:
        labels.append(vocab.index_of(node.label))
        if node.is_preterminal():
            visit_positions.append(len(labels) - 1)
            return
        kids = reversed(node.children) if right_first else node.children
        for child in kids:
            visit(child)

    visit(root)
    # The right-first walk reaches words right to left; flip so positions
    # are indexed by sentence word order.
    if right_first:
        visit_positions.reverse()
    return Linearization(tuple(labels), tuple(visit_positions))


def linearize_pair(tree: ConstituentTree, vocab: LabelVocabulary) -> LinearizationPair:
    """Both traversals of one tree, sanity-checked against each other."""
    left = linearize_left(tree, vocab)
    right = linearize_right(tree, vocab)
    assert left.length == right.length
    assert left.word_count == right.word_count
    assert sorted(left.label_ids) == sorted(right.label_ids)
    return LinearizationPair(left, right)
