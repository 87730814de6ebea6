"""Exception types raised across the package.

They all derive from SynrepError so callers (notably the CLI) can treat
any of them as a data error, as opposed to a usage error or a bug.
"""


class SynrepError(Exception):
    """Base class for every error this package raises on bad data."""


# --- tree text format -------------------------------------------------------

class TreeFormatError(SynrepError):
    """Malformed bracketed tree text."""


class UnbalancedBrackets(TreeFormatError):
    pass


class EmptyNode(TreeFormatError):
    pass


class MissingLabel(TreeFormatError):
    pass


class EmptyInput(TreeFormatError):
    pass


class InvalidTree(SynrepError):
    """A programmatically built tree violates the structural invariants."""


class EmptyCorpus(SynrepError):
    pass


class UnknownLabel(SynrepError):
    pass


# --- numerics ---------------------------------------------------------------

class NonFiniteInput(SynrepError):
    pass


class NoConvergence(SynrepError):
    pass


class DegenerateInput(SynrepError):
    pass


class NonFiniteEvaluation(SynrepError):
    pass


# --- encoder ----------------------------------------------------------------

class IdOutOfRange(SynrepError):
    pass


class DimensionMismatch(SynrepError):
    pass


class CacheMismatch(SynrepError):
    pass


# --- prosody / training -----------------------------------------------------

class CountMismatch(SynrepError):
    pass


class ZeroCount(SynrepError):
    pass


class UnknownWord(SynrepError):
    pass


class NonFiniteLoss(SynrepError):
    pass


class CheckpointError(SynrepError):
    """Model checkpoint file is malformed or has an unsupported version."""


# --- ambiguity --------------------------------------------------------------

class SearchSpaceTooLarge(SynrepError):
    pass
