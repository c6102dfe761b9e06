"""Exception hierarchy shared across the toolkit.

``DomainError`` subclasses signal well-formed inputs that fail a semantic
rule (an ungrammatical sentence, a dimension clash, ...).  The CLI maps
them to exit code 2, while plain input problems (missing files, bad JSON)
exit with 1.
"""


class QnlpError(Exception):
    """Base class for all toolkit errors."""


class DomainError(QnlpError):
    """A semantically invalid request over well-formed input."""


class NoParse(DomainError):
    """The word sequence does not reduce to the target type."""

    def __init__(self, residue, message=None):
        self.residue = list(residue)
        super().__init__(message or f"sentence does not reduce; residue {self.residue}")


class VocabularyMiss(DomainError):
    """A token is not covered by the active vocabulary."""


class UnknownWord(DomainError):
    """A queried word never occurs in the corpus."""


class DimensionMismatch(DomainError):
    """Linked tensor wires (or operator shapes) disagree in dimension."""


class WidthMismatch(DomainError):
    """A bitstring or basis state does not match the register width."""


class WidthExceeded(DomainError):
    """The compiled circuit needs more qubits than the simulator allows."""


class UnsupportedArity(DomainError):
    """No circuit fragment is defined for this word wire count."""


class BasisTooLarge(DomainError):
    """Exact Hamiltonian-cycle search is capped at 12 basis tokens."""


class UntaggedToken(DomainError):
    """A corpus token has no entry in the tag lexicon."""


class ZeroVector(DomainError):
    """An operation that requires a non-zero vector received zero."""


class ZeroOperator(DomainError):
    """An operation that requires a non-zero operator received zero."""


class EmptyHyponymSet(DomainError):
    """A hyperonym needs at least one hyponym vector."""
