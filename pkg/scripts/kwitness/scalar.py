"""
Exact Scalars

Base-ring arithmetic for matrix entries. Four rings are supported:
the integers, the rationals, the integers modulo a prime, and the
univariate polynomial ring ZZ[x] whose generator carries a nonzero
internal grading degree. Nothing here touches floating point.

Matrices store raw canonical values (int, Fraction, residue, or a tuple
of (exponent, coefficient) pairs) and do their arithmetic through the
ring's Arithmetic table; Scalar wraps a raw value with its ring for the
public API.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, NamedTuple, Optional, Tuple, Union

from .errors import NotAUnitError, RingDescriptorError, RingMismatchError, ScalarParseError

logger = logging.getLogger(__name__)

# Polynomials are tuples of (exponent, coefficient), ascending, no zero coefficients.
Poly = Tuple[Tuple[int, int], ...]


class RingKind(Enum):
    """The supported base rings."""
    INTEGERS = "integers"
    RATIONALS = "rationals"
    INTEGERS_MOD = "integers_mod"
    POLY_OVER_INTEGERS = "poly_over_integers"


class Homogeneity(Enum):
    """Non-integer answers of homogeneous_degree."""
    NON_HOMOGENEOUS = "non_homogeneous"
    ZERO_ANY_DEGREE = "zero_any_degree"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


_RING_TEXT = re.compile(r"^(?:(ZZ)|(QQ)|ZZ/(\d+)|ZZ\[x(?::([+-]?\d+))?\])$")


@dataclass(frozen=True)
class RingDescriptor:
    """
    Description of a base ring.

    Only INTEGERS_MOD carries a modulus and only POLY_OVER_INTEGERS carries
    an x_degree; both are checked at construction.
    """
    kind: RingKind
    modulus: Optional[int] = None
    x_degree: Optional[int] = None

    def __post_init__(self):
        if self.kind is RingKind.INTEGERS_MOD:
            if self.modulus is None or not _is_prime(self.modulus):
                raise RingDescriptorError(f"modulus must be prime, got {self.modulus}")
        elif self.modulus is not None:
            raise RingDescriptorError(f"{self.kind.value} takes no modulus")

        if self.kind is RingKind.POLY_OVER_INTEGERS:
            if not self.x_degree:
                raise RingDescriptorError("x_degree must be a nonzero integer")
        elif self.x_degree is not None:
            raise RingDescriptorError(f"{self.kind.value} takes no x_degree")

    @classmethod
    def integers(cls) -> 'RingDescriptor':
        return cls(RingKind.INTEGERS)

    @classmethod
    def rationals(cls) -> 'RingDescriptor':
        return cls(RingKind.RATIONALS)

    @classmethod
    def integers_mod(cls, p: int) -> 'RingDescriptor':
        return cls(RingKind.INTEGERS_MOD, modulus=p)

    @classmethod
    def poly_over_integers(cls, x_degree: int = 1) -> 'RingDescriptor':
        return cls(RingKind.POLY_OVER_INTEGERS, x_degree=x_degree)

    @classmethod
    def parse(cls, text: str) -> 'RingDescriptor':
        """
        Parse a ring from its text form.

        Args:
            text: One of ``ZZ``, ``QQ``, ``ZZ/p``, ``ZZ[x]`` or ``ZZ[x:d]``

        Returns:
            The described ring

        Raises:
            RingDescriptorError: If the text is not a ring description
        """
        match = _RING_TEXT.match(text.strip())
        if not match:
            raise RingDescriptorError(f"unknown ring '{text}'")
        integers, rationals, modulus, x_degree = match.groups()
        if integers:
            return cls.integers()
        if rationals:
            return cls.rationals()
        if modulus is not None:
            return cls.integers_mod(int(modulus))
        return cls.poly_over_integers(int(x_degree) if x_degree is not None else 1)

    def __str__(self) -> str:
        if self.kind is RingKind.INTEGERS:
            return "ZZ"
        if self.kind is RingKind.RATIONALS:
            return "QQ"
        if self.kind is RingKind.INTEGERS_MOD:
            return f"ZZ/{self.modulus}"
        if self.x_degree == 1:
            return "ZZ[x]"
        return f"ZZ[x:{self.x_degree}]"

    @property
    def is_graded(self) -> bool:
        """Whether objects over this ring may carry nonzero gradings."""
        return self.kind is RingKind.POLY_OVER_INTEGERS

    def canonical(self, value: Any) -> Any:
        """
        Bring a raw value into the ring's canonical form.

        Canonicalizing an already canonical value returns an equal value.

        Raises:
            ScalarParseError: If the value cannot represent an element of this ring
        """
        if isinstance(value, Scalar):
            if value.ring != self:
                raise RingMismatchError(f"scalar over {value.ring} used in {self}")
            return value.value
        if isinstance(value, bool):
            value = int(value)

        if self.kind is RingKind.INTEGERS:
            if isinstance(value, Fraction) and value.denominator == 1:
                return int(value.numerator)
            if isinstance(value, int):
                return value
        elif self.kind is RingKind.RATIONALS:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
        elif self.kind is RingKind.INTEGERS_MOD:
            if isinstance(value, Fraction) and value.denominator == 1:
                value = value.numerator
            if isinstance(value, int):
                return value % self.modulus
        else:
            if isinstance(value, int):
                return ((0, value),) if value else ()
            if isinstance(value, dict):
                return _poly_freeze(value)
            if isinstance(value, tuple):
                merged: Dict[int, int] = {}
                for exponent, coefficient in value:
                    merged[exponent] = merged.get(exponent, 0) + coefficient
                return _poly_freeze(merged)
        raise ScalarParseError(f"cannot read {value!r} as an element of {self}")

    def monomial(self, coefficient: int, exponent: int) -> Any:
        """Raw value of coefficient * x^exponent (exponent must be 0 off ZZ[x])."""
        if self.kind is RingKind.POLY_OVER_INTEGERS:
            if exponent < 0:
                raise ScalarParseError("negative exponent in ZZ[x]")
            return ((exponent, coefficient),) if coefficient else ()
        if exponent != 0:
            raise ScalarParseError(f"{self} has no generator x")
        return self.canonical(coefficient)

    def degree_of(self, value: Any) -> Union[int, Homogeneity]:
        """homogeneous_degree on a raw canonical value."""
        if not value:
            return Homogeneity.ZERO_ANY_DEGREE
        if self.kind is not RingKind.POLY_OVER_INTEGERS:
            return 0
        if len(value) != 1:
            return Homogeneity.NON_HOMOGENEOUS
        return value[0][0] * self.x_degree


def _poly_freeze(terms: Dict[int, int]) -> Poly:
    for exponent in terms:
        if not isinstance(exponent, int) or exponent < 0:
            raise ScalarParseError(f"invalid exponent {exponent!r}")
    return tuple(sorted((e, c) for e, c in terms.items() if c))


def _poly_add(a: Poly, b: Poly) -> Poly:
    if not a:
        return b
    if not b:
        return a
    terms = dict(a)
    for exponent, coefficient in b:
        terms[exponent] = terms.get(exponent, 0) + coefficient
    return tuple(sorted((e, c) for e, c in terms.items() if c))


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    terms: Dict[int, int] = {}
    for e1, c1 in a:
        for e2, c2 in b:
            terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
    return tuple(sorted((e, c) for e, c in terms.items() if c))


def _poly_neg(a: Poly) -> Poly:
    return tuple((e, -c) for e, c in a)


class Arithmetic(NamedTuple):
    """Raw-value operations of one ring, looked up once per matrix operation."""
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]


@lru_cache(maxsize=None)
def arithmetic(ring: RingDescriptor) -> Arithmetic:
    """Return the raw arithmetic table for a ring."""
    if ring.kind is RingKind.INTEGERS:
        return Arithmetic(0, 1, lambda a, b: a + b, lambda a, b: a * b, lambda a: -a)
    if ring.kind is RingKind.RATIONALS:
        return Arithmetic(Fraction(0), Fraction(1), lambda a, b: a + b,
                          lambda a, b: a * b, lambda a: -a)
    if ring.kind is RingKind.INTEGERS_MOD:
        p = ring.modulus
        return Arithmetic(0, 1 % p, lambda a, b: (a + b) % p,
                          lambda a, b: (a * b) % p, lambda a: (-a) % p)
    return Arithmetic((), ((0, 1),), _poly_add, _poly_mul, _poly_neg)


@dataclass(frozen=True)
class Scalar:
    """An exact ring element in canonical form."""
    ring: RingDescriptor
    value: Any

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.canonical(self.value))

    @classmethod
    def from_int(cls, ring: RingDescriptor, n: int) -> 'Scalar':
        return cls(ring, n)

    @classmethod
    def zero(cls, ring: RingDescriptor) -> 'Scalar':
        return cls(ring, arithmetic(ring).zero)

    @classmethod
    def one(cls, ring: RingDescriptor) -> 'Scalar':
        return cls(ring, arithmetic(ring).one)

    def is_zero(self) -> bool:
        return not self.value

    def __add__(self, other: 'Scalar') -> 'Scalar':
        return ring_arith("add", self, other)

    def __sub__(self, other: 'Scalar') -> 'Scalar':
        return ring_arith("sub", self, other)

    def __mul__(self, other: 'Scalar') -> 'Scalar':
        return ring_arith("mul", self, other)

    def __neg__(self) -> 'Scalar':
        return ring_arith("neg", self)

    def __str__(self) -> str:
        return format_scalar(self)


def ring_arith(op: str, a: Scalar, b: Optional[Scalar] = None) -> Scalar:
    """
    Exact ring operation.

    Args:
        op: One of 'add', 'mul', 'neg', 'sub'
        a: First operand
        b: Second operand (ignored for 'neg')

    Returns:
        The result in canonical form

    Raises:
        RingMismatchError: If a and b live over different rings
    """
    ops = arithmetic(a.ring)
    if op == "neg":
        return Scalar(a.ring, ops.neg(a.value))
    if b is None:
        raise ValueError(f"operation '{op}' needs two operands")
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot {op} {a.ring} and {b.ring} scalars")
    if op == "add":
        return Scalar(a.ring, ops.add(a.value, b.value))
    if op == "sub":
        return Scalar(a.ring, ops.add(a.value, ops.neg(b.value)))
    if op == "mul":
        return Scalar(a.ring, ops.mul(a.value, b.value))
    raise ValueError(f"unknown ring operation '{op}'")


def is_unit(a: Scalar) -> bool:
    """Whether a is invertible in its ring."""
    try:
        inverse(a)
    except NotAUnitError:
        return False
    return True


def inverse(a: Scalar) -> Scalar:
    """
    Multiplicative inverse.

    Raises:
        NotAUnitError: If a is zero or not a unit (e.g. 2 over ZZ, x over ZZ[x])
    """
    ring, value = a.ring, a.value
    if not value:
        raise NotAUnitError(f"0 is not a unit in {ring}")
    if ring.kind is RingKind.RATIONALS:
        return Scalar(ring, 1 / value)
    if ring.kind is RingKind.INTEGERS_MOD:
        return Scalar(ring, pow(value, -1, ring.modulus))
    if ring.kind is RingKind.INTEGERS and value in (1, -1):
        return a
    if ring.kind is RingKind.POLY_OVER_INTEGERS and value in (((0, 1),), ((0, -1),)):
        return a
    raise NotAUnitError(f"{format_scalar(a)} is not a unit in {ring}")


def homogeneous_degree(a: Scalar) -> Union[int, Homogeneity]:
    """
    Internal degree of a homogeneous scalar.

    Nonzero scalars of ungraded rings have degree 0; c*x^e has degree
    e * x_degree; zero is homogeneous of every degree.
    """
    return a.ring.degree_of(a.value)


def format_value(ring: RingDescriptor, value: Any) -> str:
    """Canonical text of a raw value."""
    if ring.kind is not RingKind.POLY_OVER_INTEGERS:
        return str(value)
    if not value:
        return "0"
    parts = []
    for exponent, coefficient in reversed(value):
        magnitude = abs(coefficient)
        if exponent == 0:
            body = str(magnitude)
        else:
            monomial = "x" if exponent == 1 else f"x^{exponent}"
            body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
        if coefficient < 0:
            parts.append("-" + body)
        elif parts:
            parts.append("+" + body)
        else:
            parts.append(body)
    return "".join(parts)


def format_scalar(a: Scalar) -> str:
    """Canonical text of a scalar (the form used in documents)."""
    return format_value(a.ring, a.value)


_INTEGER_TEXT = re.compile(r"^[+-]?\d+$")
_FRACTION_TEXT = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_POLY_TERM = re.compile(r"^(?:(\d+)|(?:(\d+)\*)?x(?:\^(\d+))?)$")


def parse_value(ring: RingDescriptor, text: str) -> Any:
    """
    Parse the text form of a scalar into a raw canonical value.

    Polynomial text must already be canonical (spaces aside).

    Raises:
        ScalarParseError: If the text is not a scalar of the ring
    """
    text = text.strip()
    if ring.kind in (RingKind.INTEGERS, RingKind.INTEGERS_MOD):
        if not _INTEGER_TEXT.match(text):
            raise ScalarParseError(f"'{text}' is not an integer")
        return ring.canonical(int(text))

    if ring.kind is RingKind.RATIONALS:
        match = _FRACTION_TEXT.match(text)
        if not match:
            raise ScalarParseError(f"'{text}' is not a rational")
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ScalarParseError(f"zero denominator in '{text}'")
        return Fraction(int(numerator), int(denominator or 1))

    compact = text.replace(" ", "")
    tokens = re.findall(r"[+-]?[^+-]+", compact)
    if not compact or "".join(tokens) != compact:
        raise ScalarParseError(f"'{text}' is not a polynomial in x")
    terms: Dict[int, int] = {}
    for token in tokens:
        sign = -1 if token.startswith("-") else 1
        match = _POLY_TERM.match(token.lstrip("+-"))
        if not match:
            raise ScalarParseError(f"bad term '{token}' in '{text}'")
        constant, coefficient, exponent = match.groups()
        if constant is not None:
            power, amount = 0, int(constant)
        else:
            power = int(exponent) if exponent is not None else 1
            amount = int(coefficient) if coefficient is not None else 1
        terms[power] = terms.get(power, 0) + sign * amount
    value = _poly_freeze(terms)
    canonical = format_value(ring, value)
    if canonical != compact:
        raise ScalarParseError(f"'{text}' is not canonical, expected '{canonical}'")
    return value


def parse_scalar(ring: RingDescriptor, text: str) -> Scalar:
    """Parse the canonical text form of a scalar."""
    return Scalar(ring, parse_value(ring, text))
