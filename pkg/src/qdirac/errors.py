"""Exception hierarchy shared by the library and the CLI."""


class QDiracError(Exception):
    """Base class for all library errors."""


class ParameterError(QDiracError, ValueError):
    """Invalid or mismatched deformation / truncation parameters."""


class UnboundedSymbolError(QDiracError):
    """The symbol map was asked to evaluate an element unbounded at the disc boundary."""


class DivergenceError(QDiracError):
    """The weighted integral does not converge for the given element and weight."""


class DomainError(QDiracError):
    """An element lies outside the computational domain of a derivation.

    ``derivation`` names the offending operator and ``degree`` the shift
    degree whose coefficient table failed the boundedness test.
    """

    def __init__(self, message, derivation=None, degree=None):
        super().__init__(message)
        self.derivation = derivation
        self.degree = degree


class ConfigError(QDiracError, ValueError):
    """Run configuration failed validation (including twist/weight pairing)."""


class SizeError(QDiracError):
    """A dense eigenproblem exceeds the configured dimension cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ParseError(QDiracError, ValueError):
    """Malformed algebra expression.

    ``offset`` is the byte offset of the failure in the UTF-8 encoded input;
    ``expected`` is the set of tokens that would have been accepted there.
    """

    def __init__(self, message, offset=0, expected=()):
        super().__init__(f"{message} at byte {offset}" + (f"; expected one of {sorted(expected)}" if expected else ""))
        self.offset = offset
        self.expected = frozenset(expected)
