"""
Unit tests for certificates and their re-verification.
"""

import os
import sys
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from kwitness.certify import (CONE_RELATION, LR_IDENTITY, NULL_HOMOTOPY, RL_IDENTITY,
                              certify_cone_null_homotopy, certify_cone_relation,
                              certify_equivalence_invariance, certify_extraction,
                              certify_rl_witness, reverify)
from kwitness.complex import Complex, NullHomotopy, identity_map
from kwitness.generator import GenParams, gen_chain_map, gen_complex, gen_contractible, gen_equivalence
from kwitness.grothendieck import KClass, check_cone_relation, check_equivalence_invariance
from kwitness.io import Certificate, dumps, loads
from kwitness.matrix import GradedObject, Matrix
from kwitness.scalar import RingDescriptor
from kwitness.witness import (WitnessPair, build_rl_witness, cone_null_homotopy,
                              extract_equivalence)

ZZ = RingDescriptor.integers()
X = GradedObject.ungraded(1)


def m(*rows):
    return Matrix.from_rows(ZZ, rows)


def elementary():
    c = Complex(ZZ, 0, (X, X), (m([1]),))
    return c, NullHomotopy(c, {1: m([1])})


def rl_certificate():
    c, h = elementary()
    return certify_rl_witness(c, h, build_rl_witness(c, h))


class TestReverify(unittest.TestCase):
    """Certificates re-check from their sections alone."""

    def test_rl_certificate(self):
        cert = rl_certificate()
        self.assertEqual(cert.identities, [NULL_HOMOTOPY, RL_IDENTITY, LR_IDENTITY])
        self.assertEqual(cert.notes["euler_characteristic"], "0")
        self.assertTrue(reverify(cert).ok)

    def test_every_builder_reverifies(self):
        for seed in range(3):
            p = GenParams(seed=seed)
            c, h = gen_contractible(p)
            e = gen_equivalence(p)
            cone_homotopy = cone_null_homotopy(e)
            extraction = extract_equivalence(cone_homotopy, e.phi)
            a, b = gen_complex(p, "left"), gen_complex(p, "right")
            f = gen_chain_map(p, a, b)
            certificates = [
                certify_rl_witness(c, h, build_rl_witness(c, h)),
                certify_cone_null_homotopy(e, cone_homotopy),
                certify_extraction(cone_homotopy, extraction),
                certify_cone_relation(f, check_cone_relation(f)),
                certify_equivalence_invariance(e, check_equivalence_invariance(e)),
            ]
            for cert in certificates:
                with self.subTest(seed=seed, claim=cert.claim):
                    self.assertTrue(reverify(cert).ok, reverify(cert).describe())
                    self.assertTrue(reverify(loads(dumps(cert))).ok)

    def test_notes_record_signs(self):
        e = gen_equivalence(GenParams(seed=1))
        cone_homotopy = cone_null_homotopy(e)
        cert = certify_cone_null_homotopy(e, cone_homotopy)
        self.assertEqual(cert.notes["convention"], "id=dH+Hd")
        extraction = extract_equivalence(cone_homotopy, e.phi)
        notes = certify_extraction(cone_homotopy, extraction).notes
        self.assertEqual(notes["h1_sign"], f"{extraction.h1_sign:+d}")
        self.assertIn(notes["h2_sign"], ("+1", "-1"))


class TestTamperedCertificates(unittest.TestCase):

    def test_wrong_witness(self):
        cert = rl_certificate()
        cert.sections["witness"] = WitnessPair(m([1]), m([2]), 0)
        report = reverify(cert)
        self.assertEqual([v.identity for v in report.violations], [RL_IDENTITY, LR_IDENTITY])

    def test_witness_for_another_complex(self):
        cert = rl_certificate()
        cert.sections["witness"] = WitnessPair(Matrix.identity(ZZ, GradedObject.ungraded(2)),
                                               Matrix.identity(ZZ, GradedObject.ungraded(2)), 1)
        report = reverify(cert)
        self.assertFalse(report.ok)
        self.assertIn("does not match", report.first.message)

    def test_homotopy_on_another_complex(self):
        cert = rl_certificate()
        cert.sections["complex"] = Complex(ZZ, 1, (X, X), (m([1]),))
        report = reverify(cert)
        self.assertEqual(report.first.identity, NULL_HOMOTOPY)

    def test_false_homotopy(self):
        c, _ = elementary()
        cert = Certificate("claim", [NULL_HOMOTOPY],
                           {"complex": c, "homotopy": NullHomotopy(c, {1: m([2])})})
        report = reverify(cert)
        self.assertEqual(report.first.identity, NULL_HOMOTOPY)
        self.assertEqual(report.first.degree, 0)

    def test_wrong_claimed_classes(self):
        f = identity_map(elementary()[0])
        report = check_cone_relation(f)
        cert = certify_cone_relation(f, report)
        cert.sections["lhs"] = KClass({0: 1})
        self.assertEqual(reverify(cert).first.identity, CONE_RELATION)

    def test_unknown_identity_and_missing_section(self):
        cert = Certificate("claim", ["made-up identity", RL_IDENTITY], {})
        messages = [v.message for v in reverify(cert).violations]
        self.assertEqual(messages[0], "unknown identity")
        self.assertTrue(messages[1].startswith("missing section"))

    def test_empty_certificate_fails(self):
        self.assertFalse(reverify(Certificate("claim", [])).ok)


if __name__ == '__main__':
    unittest.main()
