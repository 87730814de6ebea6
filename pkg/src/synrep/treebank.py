"""Bracketed constituency trees: parsing, validation, serialization, vocabulary.

Input format is one tree per line, e.g. ``(S (NP (DT the) (NN cat)) (VP
(VB sat)))``. Internal nodes carry labels over the alphabet [A-Z0-9$-];
leaves are word tokens (any non-paren, non-whitespace string). A word
found directly under a branching node gets a synthetic ``XX`` preterminal
inserted above it, so that after parsing every word owns exactly one
unary preterminal node.
"""

import re
from dataclasses import dataclass

from .errors import (
    EmptyCorpus,
    EmptyInput,
    EmptyNode,
    InvalidTree,
    MissingLabel,
    UnbalancedBrackets,
    UnknownLabel,
)

#: Label inserted above words that lack a preterminal of their own.
FALLBACK_PRETERMINAL = "XX"

_LABEL_RE = re.compile(r"[A-Z0-9$-]+\Z")
_TOKEN_RE = re.compile(r"[()]|[^()\s]+")


@dataclass(frozen=True)
class TreeNode:
    """One node: internal (label + children) or leaf (word, no children)."""

    label: str | None = None
    word: str | None = None
    children: tuple["TreeNode", ...] = ()

    def is_leaf(self) -> bool:
        return self.word is not None

    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and self.children[0].is_leaf()


def leaf(word: str) -> TreeNode:
    return TreeNode(word=word)


def internal(label: str, children) -> TreeNode:
    return TreeNode(label=label, children=tuple(children))


@dataclass(frozen=True)
class ConstituentTree:
    """A validated constituency tree; construction checks the invariants."""

    root: TreeNode

    def __post_init__(self):
        _check_node(self.root, is_root=True)

    def words(self) -> list[str]:
        """Leaf tokens in left-to-right order."""
        out: list[str] = []
        _collect_words(self.root, out)
        return out

    def internal_labels(self) -> list[str]:
        """Labels of internal nodes in pre-order (left-first)."""
        out: list[str] = []
        _collect_labels(self.root, out)
        return out

    def internal_node_count(self) -> int:
        return len(self.internal_labels())


def _check_node(node: TreeNode, is_root: bool = False) -> None:
    if node.is_leaf():
        if is_root:
            raise InvalidTree("root cannot be a bare word")
        if node.children:
            raise InvalidTree(f"leaf {node.word!r} has children")
        if node.label is not None:
            raise InvalidTree(f"leaf {node.word!r} carries a label")
        if not node.word:
            raise InvalidTree("leaf with empty word")
        return
    if not node.children:
        raise InvalidTree(f"internal node {node.label!r} has no children")
    if node.label is None or not _LABEL_RE.match(node.label):
        raise InvalidTree(f"invalid internal label {node.label!r}")
    for child in node.children:
        if child.is_leaf() and not node.is_preterminal():
            raise InvalidTree(
                f"word {child.word!r} under {node.label!r} lacks a preterminal"
            )
        _check_node(child)


def _collect_words(node: TreeNode, out: list[str]) -> None:
    if node.is_leaf():
        out.append(node.word)
        return
    for child in node.children:
        _collect_words(child, out)


def _collect_labels(node: TreeNode, out: list[str]) -> None:
    if node.is_leaf():
        return
    out.append(node.label)
    for child in node.children:
        _collect_labels(child, out)


def parse_tree(text: str) -> ConstituentTree:
    """Parse a single bracketed expression into a validated tree.

    Raises EmptyInput, UnbalancedBrackets, EmptyNode or MissingLabel on
    malformed text.
    """
    tokens = _TOKEN_RE.findall(text)
    if not tokens:
        raise EmptyInput("no tree on input")
    # Balance is diagnosed over the whole input before any structure, so
    # "((A w)" reports the missing ')' rather than a missing label.
    depth = 0
    for tok in tokens:
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
            if depth < 0:
                raise UnbalancedBrackets("')' without matching '('")
    if depth != 0:
        raise UnbalancedBrackets(f"{depth} unclosed '('")

    stack: list[tuple[str, list[TreeNode]]] = []
    root: TreeNode | None = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if root is not None:
            raise UnbalancedBrackets(f"unexpected content after tree: {tok!r}")
        if tok == "(":
            if i + 1 >= len(tokens):
                raise UnbalancedBrackets("input ends after '('")
            head = tokens[i + 1]
            if head == "(":
                raise MissingLabel("'(' must be followed by a label")
            if head == ")":
                raise EmptyNode("'()' is not a tree")
            if not _LABEL_RE.match(head):
                raise MissingLabel(f"{head!r} is not a valid label")
            stack.append((head, []))
            i += 2
        elif tok == ")":
            assert stack  # balance was checked up front
            label, children = stack.pop()
            if not children:
                raise EmptyNode(f"node {label!r} has no children")
            node = _finish_node(label, children)
            if stack:
                stack[-1][1].append(node)
            else:
                root = node
            i += 1
        else:
            if not stack:
                raise UnbalancedBrackets(f"word {tok!r} outside brackets")
            stack[-1][1].append(leaf(tok))
            i += 1
    assert not stack and root is not None
    return ConstituentTree(root)


def _finish_node(label: str, children: list[TreeNode]) -> TreeNode:
    # Normalization: a word sharing its parent with siblings gets its own
    # synthetic preterminal so each word anchors one sequence position.
    if len(children) > 1:
        children = [
            internal(FALLBACK_PRETERMINAL, (c,)) if c.is_leaf() else c
            for c in children
        ]
    return internal(label, children)


def serialize_tree(tree: ConstituentTree) -> str:
    """Canonical single-line form; inverse of parse_tree on valid trees."""
    return _serialize_node(tree.root)


def _serialize_node(node: TreeNode) -> str:
    if node.is_leaf():
        return node.word
    inner = " ".join(_serialize_node(c) for c in node.children)
    return f"({node.label} {inner})"


class LabelVocabulary:
    """Bijection between label strings and dense 0-based ids.

    Iteration order is insertion order, so the id assignment is a pure
    function of the corpus order it was built from.
    """

    def __init__(self, labels):
        self._labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._index) != len(self._labels):
            raise ValueError("duplicate labels in vocabulary")

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} not in vocabulary") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelVocabulary) and self._labels == other._labels


def build_vocabulary(trees) -> LabelVocabulary:
    """Collect internal-node labels over a corpus, first occurrence first."""
    seen: dict[str, None] = {}
    empty = True
    for tree in trees:
        empty = False
        for label in tree.internal_labels():
            seen.setdefault(label, None)
    if empty:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    return LabelVocabulary(seen.keys())


def read_tree_file(path) -> list[ConstituentTree]:
    """Read one tree per line; blank lines and '#' comments are skipped.

    Format errors are re-raised with the 1-based line number prepended.
    """
    trees = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                trees.append(parse_tree(stripped))
            except (EmptyInput, UnbalancedBrackets, EmptyNode, MissingLabel) as err:
                raise type(err)(f"line {lineno}: {err}") from err
    return trees
