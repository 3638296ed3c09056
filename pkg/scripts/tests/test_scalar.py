"""
Unit tests for exact scalars and ring descriptors.
"""

import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from kwitness.errors import NotAUnitError, RingDescriptorError, RingMismatchError, ScalarParseError
from kwitness.scalar import (Homogeneity, RingDescriptor, RingKind, Scalar, format_scalar,
                             homogeneous_degree, inverse, is_unit, parse_scalar, ring_arith)

ZZ = RingDescriptor.integers()
QQ = RingDescriptor.rationals()
F5 = RingDescriptor.integers_mod(5)
ZX = RingDescriptor.poly_over_integers(1)
ZX2 = RingDescriptor.poly_over_integers(2)


class TestRingDescriptor(unittest.TestCase):
    """Ring construction and text forms."""

    def test_text_forms(self):
        for text, ring in [("ZZ", ZZ), ("QQ", QQ), ("ZZ/5", F5), ("ZZ[x]", ZX), ("ZZ[x:2]", ZX2),
                           ("ZZ[x:-1]", RingDescriptor.poly_over_integers(-1))]:
            self.assertEqual(RingDescriptor.parse(text), ring)
            self.assertEqual(str(ring), text)

    def test_modulus_must_be_prime(self):
        with self.assertRaises(RingDescriptorError):
            RingDescriptor.integers_mod(4)
        with self.assertRaises(RingDescriptorError):
            RingDescriptor.integers_mod(1)

    def test_x_degree_must_be_nonzero(self):
        with self.assertRaises(RingDescriptorError):
            RingDescriptor.poly_over_integers(0)
        with self.assertRaises(RingDescriptorError):
            RingDescriptor.parse("ZZ[x:0]")

    def test_unknown_text(self):
        for text in ["", "RR", "ZZ/", "ZZ[y]", "Z"]:
            with self.assertRaises(RingDescriptorError):
                RingDescriptor.parse(text)

    def test_only_polynomials_are_graded(self):
        self.assertTrue(ZX.is_graded)
        self.assertFalse(ZZ.is_graded)
        self.assertFalse(F5.is_graded)
        self.assertIs(ZX.kind, RingKind.POLY_OVER_INTEGERS)


class TestArithmetic(unittest.TestCase):
    """Exact operations in each ring."""

    def test_integers(self):
        a, b = Scalar(ZZ, 6), Scalar(ZZ, -4)
        self.assertEqual((a + b).value, 2)
        self.assertEqual((a * b).value, -24)
        self.assertEqual((a - b).value, 10)
        self.assertEqual((-a).value, -6)

    def test_rationals_stay_exact(self):
        a = Scalar(QQ, Fraction(1, 3))
        b = Scalar(QQ, Fraction(1, 6))
        self.assertEqual((a + b).value, Fraction(1, 2))
        self.assertEqual(format_scalar(a - b), "1/6")

    def test_modular_reduction(self):
        self.assertEqual(Scalar(F5, -1).value, 4)
        self.assertEqual((Scalar(F5, 3) * Scalar(F5, 4)).value, 2)
        self.assertEqual((Scalar(F5, 3) + Scalar(F5, 2)).value, 0)

    def test_polynomials(self):
        p = parse_scalar(ZX, "x+1")
        q = parse_scalar(ZX, "x-1")
        self.assertEqual(format_scalar(p * q), "x^2-1")
        self.assertEqual(format_scalar(p + q), "2*x")
        self.assertTrue((p - p).is_zero())

    def test_ring_mismatch(self):
        with self.assertRaises(RingMismatchError):
            ring_arith("add", Scalar(ZZ, 1), Scalar(QQ, 1))

    def test_unknown_operation(self):
        with self.assertRaises(ValueError):
            ring_arith("div", Scalar(ZZ, 1), Scalar(ZZ, 1))


class TestUnits(unittest.TestCase):

    def test_inverse(self):
        self.assertEqual(inverse(Scalar(QQ, Fraction(2, 3))).value, Fraction(3, 2))
        self.assertEqual(inverse(Scalar(F5, 2)).value, 3)
        self.assertEqual(inverse(Scalar(ZZ, -1)).value, -1)
        self.assertEqual(inverse(Scalar(ZX, -1)).value, ((0, -1),))

    def test_not_a_unit(self):
        for scalar in [Scalar(ZZ, 2), Scalar(ZZ, 0), parse_scalar(ZX, "x"), Scalar(F5, 0)]:
            with self.assertRaises(NotAUnitError):
                inverse(scalar)
            self.assertFalse(is_unit(scalar))
        self.assertTrue(is_unit(Scalar(F5, 4)))


class TestHomogeneity(unittest.TestCase):

    def test_degrees(self):
        self.assertEqual(homogeneous_degree(Scalar(ZZ, 5)), 0)
        self.assertEqual(homogeneous_degree(parse_scalar(ZX, "3*x^2")), 2)
        self.assertEqual(homogeneous_degree(parse_scalar(ZX2, "-x^3")), 6)
        self.assertIs(homogeneous_degree(parse_scalar(ZX, "x+1")), Homogeneity.NON_HOMOGENEOUS)
        self.assertIs(homogeneous_degree(Scalar(ZX, 0)), Homogeneity.ZERO_ANY_DEGREE)
        self.assertIs(homogeneous_degree(Scalar(QQ, 0)), Homogeneity.ZERO_ANY_DEGREE)


class TestTextForms(unittest.TestCase):
    """Parsing and formatting of scalars."""

    def test_canonical_polynomial_text(self):
        for text in ["x+1", "x^2-2*x+1", "-x", "0", "3*x^4", "-2*x^3+x-7"]:
            self.assertEqual(format_scalar(parse_scalar(ZX, text)), text)
        self.assertEqual(format_scalar(parse_scalar(ZX, "x^2 - 2*x + 1")), "x^2-2*x+1")

    def test_non_canonical_polynomial_text(self):
        for text in ["x^0", "1*x", "x^1", "0*x", "1+x", "x-x", "+3*x^4", "x+0", "x+x", "-0"]:
            with self.subTest(text=text):
                with self.assertRaises(ScalarParseError):
                    parse_scalar(ZX, text)

    def test_rational_text(self):
        self.assertEqual(format_scalar(parse_scalar(QQ, "-4/6")), "-2/3")
        self.assertEqual(format_scalar(parse_scalar(QQ, "7")), "7")

    def test_modular_text(self):
        self.assertEqual(format_scalar(parse_scalar(F5, "-2")), "3")

    def test_bad_text(self):
        bad = [(ZZ, "1/2"), (ZZ, "x"), (QQ, "1/0"), (QQ, "a"), (ZX, "y"), (ZX, "x^-1"),
               (ZX, ""), (ZX, "2x"), (F5, "1.0")]
        for ring, text in bad:
            with self.assertRaises(ScalarParseError):
                parse_scalar(ring, text)

    def test_polynomial_products_match_sympy(self):
        """Polynomial multiplication agrees with sympy over ZZ."""
        from sympy import Poly, symbols, ZZ as SZZ
        x = symbols('x')
        p_text, q_text = "2*x^3-x+4", "x^2+3*x-5"
        product = parse_scalar(ZX, p_text) * parse_scalar(ZX, q_text)
        expected = (Poly(2 * x**3 - x + 4, x, domain=SZZ) * Poly(x**2 + 3 * x - 5, x, domain=SZZ))
        coefficients = dict((e, c) for e, c in product.value)
        for (e,), c in expected.terms():
            self.assertEqual(coefficients.get(e, 0), int(c))
        self.assertEqual(len(coefficients), len(expected.terms()))


if __name__ == '__main__':
    unittest.main()
