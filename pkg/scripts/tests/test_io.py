"""
Unit tests for the document format.

Golden files in fixtures/golden hold the exact bytes the serializer must
produce; fixtures/corrupted holds hand-written documents that must be
rejected, or parsed and then fail their claim.
"""

import json
import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from kwitness.complex import (Complex, Homotopy, HomotopyEquivalence, NullHomotopy,
                              identity_map, shift, validate_null_homotopy, zero_map)
from kwitness.errors import (DocumentSchemaError, DocumentSyntaxError, DocumentValidationError,
                             NotNullHomotopicError)
from kwitness.generator import GenParams, gen_chain_map, gen_complex, gen_contractible, gen_equivalence
from kwitness.grothendieck import KClass
from kwitness.io import (FORMAT_VERSION, Certificate, PayloadKind, dumps, loads, parse,
                         serialize, to_document)
from kwitness.matrix import GradedObject, Matrix
from kwitness.scalar import RingDescriptor, parse_value
from kwitness.witness import build_rl_witness, extract_equivalence

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')
ZZ = RingDescriptor.integers()
X = GradedObject.ungraded(1)


def read_fixture(*parts):
    with open(os.path.join(FIXTURES, *parts), 'r', encoding='utf-8', newline='') as f:
        return f.read()


def m(*rows, ring=ZZ):
    return Matrix.from_rows(ring, rows)


def elementary():
    c = Complex(ZZ, 0, (X, X), (m([1]),))
    return c, NullHomotopy(c, {1: m([1])})


def golden_objects():
    """Every golden fixture with the object it encodes."""
    from kwitness.certify import certify_rl_witness
    from kwitness.complex import cone

    c, h = elementary()
    zx = RingDescriptor.poly_over_integers(1)
    graded = Complex(zx, -2, (GradedObject((0,)), GradedObject((1,))),
                     (Matrix(zx, GradedObject((0,)), GradedObject((1,)),
                             ((parse_value(zx, "3*x"),),)),))
    f5 = RingDescriptor.integers_mod(5)
    zero = Complex.zero(ZZ)
    contraction = HomotopyEquivalence(zero_map(c, zero), zero_map(zero, c),
                                      Homotopy(c, c, {1: m([-1])}), Homotopy(zero, zero, {}))
    qq = RingDescriptor.rationals()
    return {
        'zero_complex.json': zero,
        'elementary_complex.json': c,
        'shifted_elementary_complex.json': shift(c, 1),
        'mod5_complex.json': Complex(f5, 0, (X, X), (m([-1], ring=f5),)),
        'graded_complex.json': graded,
        'cone_of_identity.json': cone(identity_map(c)),
        'elementary_null_homotopy.json': h,
        'identity_chain_map.json': identity_map(c),
        'contraction_equivalence.json': contraction,
        'elementary_witness_pair.json': build_rl_witness(c, h),
        'rational_matrix.json': m([Fraction(1, 2), 0], [0, -3], ring=qq),
        'kclass.json': KClass({1: 2, 0: -1, -2: 1}),
        'zero_kclass.json': KClass.zero(),
        'elementary_rl_certificate.json': certify_rl_witness(c, h, build_rl_witness(c, h)),
    }


class TestGoldenFiles(unittest.TestCase):
    """Serialized bytes never drift."""

    def test_serialize_matches_golden_bytes(self):
        for name, obj in golden_objects().items():
            with self.subTest(fixture=name):
                self.assertEqual(dumps(obj), read_fixture('golden', name))

    def test_parse_golden_gives_back_the_object(self):
        for name, obj in golden_objects().items():
            with self.subTest(fixture=name):
                self.assertEqual(loads(read_fixture('golden', name)), obj)

    def test_serialize_parse_serialize_is_stable(self):
        for name in os.listdir(os.path.join(FIXTURES, 'golden')):
            text = read_fixture('golden', name)
            with self.subTest(fixture=name):
                self.assertEqual(serialize(parse(text)), text)

    def test_at_least_ten_golden_files(self):
        self.assertGreaterEqual(len(os.listdir(os.path.join(FIXTURES, 'golden'))), 10)


class TestDocuments(unittest.TestCase):

    def test_to_document_infers_kind_and_ring(self):
        c, h = elementary()
        doc = to_document(h)
        self.assertIs(doc.kind, PayloadKind.NULL_HOMOTOPY)
        self.assertEqual(doc.ring, ZZ)
        self.assertEqual(doc.version, FORMAT_VERSION)
        kclass_doc = to_document(KClass({0: 1}), ring=RingDescriptor.rationals())
        self.assertEqual(str(kclass_doc.ring), "QQ")

    def test_output_is_canonical(self):
        c, _ = elementary()
        text = dumps(c)
        self.assertTrue(text.endswith("}\n"))
        self.assertNotIn("\r", text)
        self.assertEqual(list(json.loads(text).keys()), ["kind", "payload", "ring", "version"])

    def test_refuses_to_serialize_invalid_objects(self):
        c, _ = elementary()
        with self.assertRaises(DocumentValidationError) as context:
            dumps(NullHomotopy(c, {1: m([2])}))
        self.assertEqual(context.exception.degree, 0)
        bad = Complex(ZZ, 0, (X, X, X), (m([1]), m([1])))
        with self.assertRaises(DocumentValidationError):
            dumps(bad)

    def test_generated_corpus_round_trips(self):
        for ring in ["ZZ", "QQ", "ZZ/3", "ZZ[x]", "ZZ[x:-2]"]:
            for seed in range(4):
                p = GenParams(seed=seed, ring=RingDescriptor.parse(ring))
                c, h = gen_contractible(p)
                a, b = gen_complex(p, "left"), gen_complex(p, "right")
                for obj in [c, h, gen_equivalence(p), gen_chain_map(p, a, b)]:
                    text = dumps(obj)
                    self.assertEqual(loads(text), obj)
                    self.assertEqual(dumps(loads(text)), text)

    def test_unicode_and_line_endings(self):
        cert = Certificate("naïve claim", ["id=dh+hd"], {"homotopy": elementary()[1]}, {})
        text = dumps(cert)
        self.assertIn("naïve", text)
        self.assertEqual(loads(text).claim, "naïve claim")


class TestRejectedDocuments(unittest.TestCase):
    """Errors name the failing field."""

    def test_syntax_error_has_line(self):
        with self.assertRaises(DocumentSyntaxError) as context:
            parse(read_fixture('corrupted', 'truncated.json'))
        self.assertIsNotNone(context.exception.line)

    def test_missing_field(self):
        with self.assertRaises(DocumentSchemaError) as context:
            parse(read_fixture('corrupted', 'missing_min_degree.json'))
        self.assertEqual(context.exception.path, "payload")
        self.assertIn("min_degree", str(context.exception))

    def test_d_squared_nonzero_is_located(self):
        with self.assertRaises(DocumentValidationError) as context:
            parse(read_fixture('corrupted', 'd_squared_nonzero.json'))
        self.assertEqual(context.exception.degree, 0)
        self.assertEqual(context.exception.path, "payload")

    def test_false_claims_checked_unless_asked_not_to(self):
        text = read_fixture('corrupted', 'false_null_homotopy.json')
        with self.assertRaises(DocumentValidationError):
            parse(text)
        h = loads(text, check_claims=False)
        report = validate_null_homotopy(h)
        self.assertEqual(report.first.degree, 0)

        pair_text = read_fixture('corrupted', 'broken_witness_pair.json')
        with self.assertRaises(DocumentValidationError):
            parse(pair_text)
        self.assertEqual(loads(pair_text, check_claims=False).L, m([2]))

    def test_flipped_cone_block_is_located(self):
        c, _ = elementary()
        h = loads(read_fixture('corrupted', 'flipped_cone_homotopy.json'), check_claims=False)
        with self.assertRaises(NotNullHomotopicError) as context:
            extract_equivalence(h, identity_map(c))
        self.assertEqual(context.exception.degree, -1)

    def _mutated(self, change):
        data = json.loads(read_fixture('golden', 'elementary_complex.json'))
        change(data)
        return json.dumps(data)

    def test_schema_errors(self):
        cases = [
            (lambda d: d.update(version="2"), "version"),
            (lambda d: d.update(ring="RR"), "ring"),
            (lambda d: d.update(kind="tensor"), "kind"),
            (lambda d: d.update(extra=1), ""),
            (lambda d: d["payload"].update(min_degree="0"), "payload.min_degree"),
            (lambda d: d["payload"]["objects"].__setitem__(0, [True]), "payload.objects[0][0]"),
            (lambda d: d["payload"]["differentials"][0][0].__setitem__(0, "1/2"),
             "payload.differentials[0][0][0]"),
        ]
        for change, path in cases:
            with self.subTest(path=path):
                with self.assertRaises(DocumentSchemaError) as context:
                    parse(self._mutated(change))
                self.assertEqual(context.exception.path, path)

    def test_wrong_shape_is_a_validation_error(self):
        text = self._mutated(lambda d: d["payload"]["differentials"][0].append(["1"]))
        with self.assertRaises(DocumentValidationError) as context:
            parse(text)
        self.assertEqual(context.exception.path, "payload.differentials[0]")

    def test_non_canonical_degree_key(self):
        data = json.loads(read_fixture('golden', 'elementary_null_homotopy.json'))
        data["payload"]["components"] = {"+1": [["1"]]}
        with self.assertRaises(DocumentSchemaError):
            parse(json.dumps(data))

    def test_kclass_text_must_match(self):
        data = json.loads(read_fixture('golden', 'kclass.json'))
        data["payload"]["text"] = "2q + q^-2 - 1"
        with self.assertRaises(DocumentValidationError) as context:
            parse(json.dumps(data))
        self.assertEqual(context.exception.path, "payload.text")

    def test_non_canonical_polynomial_entry(self):
        data = json.loads(read_fixture('golden', 'graded_complex.json'))
        for text in ["x^0", "3*x^1", "3x", "0*x+3*x"]:
            with self.subTest(text=text):
                data["payload"]["differentials"][0][0][0] = text
                with self.assertRaises(DocumentSchemaError) as context:
                    parse(json.dumps(data))
                self.assertEqual(context.exception.path, "payload.differentials[0][0][0]")


if __name__ == '__main__':
    unittest.main()
