"""
Error Types

Exception hierarchy shared by every kwitness module.

Validation functions return reports instead of raising; the exceptions
below are for broken preconditions and for witnesses that fail their own
postconditions.
"""

from typing import Optional


class KWitnessError(Exception):
    """Base class for all kwitness errors."""

    def __init__(self, message: str, degree: Optional[int] = None,
                 identity: Optional[str] = None):
        super().__init__(message)
        self.degree = degree
        self.identity = identity


class RingMismatchError(KWitnessError):
    """Raised when operands live over different base rings."""
    pass


class RingDescriptorError(KWitnessError):
    """Raised for an invalid ring description (non-prime modulus, zero x degree, bad text)."""
    pass


class NotAUnitError(KWitnessError):
    """Raised when inverting a scalar that is not a unit of its ring."""
    pass


class ScalarParseError(KWitnessError):
    """Raised when a scalar text form cannot be parsed for the given ring."""
    pass


class ShapeMismatchError(KWitnessError):
    """Raised when matrix or complex shapes do not chain."""
    pass


class HomogeneityError(KWitnessError):
    """Raised when a matrix entry is not homogeneous of the required degree."""
    pass


class InvalidComplexError(KWitnessError):
    """Raised when d^{j+1} d^j != 0 where a valid complex is required."""
    pass


class InvalidChainMapError(KWitnessError):
    """Raised when a map family does not commute with the differentials."""
    pass


class InvalidEquivalenceError(KWitnessError):
    """Raised when a homotopy equivalence fails one of its homotopy identities."""
    pass


class NotNullHomotopicError(KWitnessError):
    """Raised when a supplied null-homotopy does not satisfy id = dh + hd."""
    pass


class SignResolutionError(KWitnessError):
    """Raised when the cone homotopy verifies under no sign convention."""
    pass


class ExtractionError(KWitnessError):
    """Raised when no sign variant turns cone homotopy blocks into an equivalence."""
    pass


class InternalVerificationError(KWitnessError):
    """Raised when a constructed witness fails its own check."""
    pass


class ClaimFailedError(KWitnessError):
    """Raised when a well-formed input makes a claim that does not hold."""
    pass


class DocumentError(KWitnessError):
    """Base class for document parsing and serialization errors."""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None,
                 degree: Optional[int] = None):
        location = path or "document"
        if line is not None:
            location = f"{location} (line {line})"
        super().__init__(f"{location}: {message}", degree=degree)
        self.path = path
        self.line = line


class DocumentSyntaxError(DocumentError):
    """Raised for malformed JSON."""
    pass


class DocumentSchemaError(DocumentError):
    """Raised for missing, extra or mistyped fields, or an unknown version."""
    pass


class DocumentValidationError(DocumentError):
    """Raised when a well-formed document describes an invalid object."""
    pass


class ConfigValidationError(KWitnessError):
    """Exception raised when configuration validation fails."""
    pass
