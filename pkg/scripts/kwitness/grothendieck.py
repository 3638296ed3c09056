"""
Grothendieck Classes

Split Grothendieck classes of graded free objects, recorded as Laurent
polynomials in q (coefficient of q^g = number of generators of grading g),
Euler characteristics of complexes, and executable checks of the relations
that make the Euler characteristic a homotopy invariant.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from .complex import (ChainMap, Complex, HomotopyEquivalence, brutal_truncation, cone,
                      direct_sum_complex, shift, validate_chain_map, validate_equivalence)
from .errors import InvalidChainMapError, InvalidEquivalenceError, ScalarParseError
from .matrix import GradedObject
from .witness import build_rl_witness, cone_null_homotopy

logger = logging.getLogger(__name__)

_TERM = re.compile(r"([+-]?)(\d*)(?:(q)(?:\^(-?\d+))?)?")


@dataclass(frozen=True)
class KClass:
    """A Laurent polynomial in q with integer coefficients; zeros are never stored."""
    coefficients: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {int(g): int(c) for g, c in self.coefficients.items() if c}
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items())))

    @classmethod
    def zero(cls) -> 'KClass':
        return cls({})

    @classmethod
    def from_object(cls, x: GradedObject) -> 'KClass':
        return cls(dict(Counter(x.gradings)))

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: 'KClass') -> 'KClass':
        total = dict(self.coefficients)
        for g, c in other.coefficients.items():
            total[g] = total.get(g, 0) + c
        return KClass(total)

    def __neg__(self) -> 'KClass':
        return KClass({g: -c for g, c in self.coefficients.items()})

    def __sub__(self, other: 'KClass') -> 'KClass':
        return self + (-other)

    def __mul__(self, n: int) -> 'KClass':
        return KClass({g: n * c for g, c in self.coefficients.items()})

    __rmul__ = __mul__

    def evaluate(self, q: int = 1) -> Union[int, Fraction]:
        """Value at an integer q; q = 1 gives the ungraded Euler characteristic."""
        total = sum((c * Fraction(q) ** g for g, c in self.coefficients.items()), Fraction(0))
        return int(total) if total.denominator == 1 else total

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        text = ""
        for g, c in sorted(self.coefficients.items(), reverse=True):
            magnitude = abs(c)
            if g == 0:
                body = str(magnitude)
            else:
                power = "q" if g == 1 else f"q^{g}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if not text:
                text = body if c > 0 else f"-{body}"
            else:
                text += f" + {body}" if c > 0 else f" - {body}"
        return text

    @classmethod
    def parse(cls, text: str) -> 'KClass':
        """
        Parse the q-notation produced by str().

        Raises:
            ScalarParseError: If the text is not a Laurent polynomial in q,
                or is one written in other than canonical form
        """
        s = text.replace(" ", "")
        if not s:
            raise ScalarParseError("empty class text")
        coefficients: Dict[int, int] = {}
        pos = 0
        while pos < len(s):
            match = _TERM.match(s, pos)
            sign, digits, q, power = match.groups()
            if match.end() == pos or not (digits or q) or (pos > 0 and not sign):
                raise ScalarParseError(f"cannot parse class '{text}' at offset {pos}")
            if q is None and power is not None:
                raise ScalarParseError(f"cannot parse class '{text}'")
            c = int(digits) if digits else 1
            g = (int(power) if power is not None else 1) if q else 0
            coefficients[g] = coefficients.get(g, 0) + (-c if sign == "-" else c)
            pos = match.end()
        result = cls(coefficients)
        canonical = str(result)
        if canonical.replace(" ", "") != s:
            raise ScalarParseError(f"class '{text}' is not canonical, expected '{canonical}'")
        return result


def kclass_of_object(x: GradedObject) -> KClass:
    """Multiset of generator gradings as a Laurent polynomial."""
    return KClass.from_object(x)


def euler_characteristic(c: Complex) -> KClass:
    """Alternating sum of the classes of the terms of c."""
    total = KClass.zero()
    for j in c.degrees():
        term = kclass_of_object(c.obj(j))
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass
class RelationReport:
    """Both sides of a relation between classes."""
    relation: str
    lhs: KClass
    rhs: KClass
    witness: Optional[Any] = None

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def describe(self) -> str:
        verdict = "holds" if self.ok else "fails"
        return f"{self.relation} {verdict}: {self.lhs} vs {self.rhs}"


def check_cone_relation(f: ChainMap, check_input: bool = True) -> RelationReport:
    """
    chi(cone(f)) = chi(target) - chi(source).

    Raises:
        InvalidChainMapError: If check_input is set and f is not a chain map
    """
    if check_input:
        validate_chain_map(f).raise_for(InvalidChainMapError)
    report = RelationReport("chi(cone(f)) = chi(A2) - chi(A1)",
                            euler_characteristic(cone(f, verify=False)),
                            euler_characteristic(f.target) - euler_characteristic(f.source))
    logger.debug(report.describe())
    return report


def check_equivalence_invariance(e: HomotopyEquivalence) -> RelationReport:
    """
    Run the full pipeline for a homotopy equivalence and compare Euler characteristics.

    Builds the cone null-homotopy, turns it into an R/L witness for the cone
    and compares chi(source) with chi(target). The witness pair is attached
    to the report.

    Raises:
        InvalidEquivalenceError: If e fails validation
    """
    validate_equivalence(e).raise_for(InvalidEquivalenceError)
    cone_homotopy = cone_null_homotopy(e, check_input=False)
    pair = build_rl_witness(cone_homotopy.cone_complex, cone_homotopy.homotopy)
    report = RelationReport("chi(A1) = chi(A2)", euler_characteristic(e.source),
                            euler_characteristic(e.target), witness=pair)
    logger.debug(report.describe())
    return report


def check_shift_relation(c: Complex, m: int) -> RelationReport:
    """chi(c[m]) = (-1)^m chi(c)."""
    rhs = euler_characteristic(c)
    return RelationReport(f"chi(A[{m}]) = (-1)^{m} chi(A)",
                          euler_characteristic(shift(c, m)), -rhs if m % 2 else rhs)


def check_sum_relation(a: Complex, b: Complex) -> RelationReport:
    """chi(a (+) b) = chi(a) + chi(b)."""
    return RelationReport("chi(A (+) B) = chi(A) + chi(B)",
                          euler_characteristic(direct_sum_complex(a, b)),
                          euler_characteristic(a) + euler_characteristic(b))


def check_truncation_relation(c: Complex) -> RelationReport:
    """Peel off the lowest term until nothing is left and add up the pieces."""
    total = KClass.zero()
    rest = c
    while rest.objects:
        lowest, rest = brutal_truncation(rest)
        total = total + euler_characteristic(lowest)
    return RelationReport("chi(A) = sum of (-1)^k <A^k> over truncations",
                          euler_characteristic(c), total)
