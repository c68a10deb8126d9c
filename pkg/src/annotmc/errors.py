"""Exception types shared across the package."""


class AnnotmcError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(AnnotmcError):
    """Malformed graph / decomposition / formula file.

    Carries the 1-based line (or character position for formulas) when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SemanticError(AnnotmcError):
    """Structurally well-formed input that violates a contract
    (undeclared vertex, duplicate boundary id, residue >= modulus, ...)."""


class ScopeError(AnnotmcError):
    """A variable occurrence that is neither bound nor declared free."""


class EnvelopeError(AnnotmcError):
    """Explicit refusal: the instance exceeds the documented exact-mode size
    envelope.  Never silently approximate instead."""


class CompatibilityError(AnnotmcError):
    """Boundaried graphs whose boundaries do not match."""


class PreconditionError(AnnotmcError):
    """A checked operation precondition failed (named in the message)."""
