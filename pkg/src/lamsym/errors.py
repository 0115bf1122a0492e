"""Exception hierarchy shared by every lamsym module."""

from __future__ import annotations


class LamsymError(Exception):
    """Base class for all errors raised by lamsym."""


class SymbolError(LamsymError, ValueError):
    """Invalid or conflicting symbol declaration."""


class ParseError(LamsymError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset (UTF-8) into the source text where the
    problem was detected.
    """

    def __init__(self, message: str, offset: int, text: str = ""):
        self.message = message
        self.offset = offset
        self.text = text
        super().__init__(f"{message} (at byte {offset})")


class NonLatticeError(LamsymError, ValueError):
    """A power or exponential left the lattice-exponent expression class."""


class NormalizationError(LamsymError, ArithmeticError):
    """Normalization failed, e.g. an identically zero denominator."""


class SubstitutionError(LamsymError, ValueError):
    """Invalid substitution (cyclic bindings, substituting a function argument)."""


class JetOrderError(LamsymError, ValueError):
    """A derivation needed a jet variable beyond the configured cap."""


class DegenerateError(LamsymError, ValueError):
    """An input violates a non-degeneracy requirement (a divisor that is identically 0)."""


class HypothesisError(LamsymError, ValueError):
    """A hypothesis of a transformation could not be verified symbolically.

    ``residual`` carries the expression that should have vanished.
    """

    def __init__(self, message: str, residual=None):
        self.residual = residual
        super().__init__(message)


class ProblemFileError(LamsymError, ValueError):
    """Invalid problem file: syntax, unknown reference or bad expression."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
