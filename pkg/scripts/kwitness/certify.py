"""
Certificates

Bundles a verified claim with its inputs and witness, naming every identity
that was checked, and re-checks such bundles from their sections alone.
"""

import logging
from typing import Callable, Dict

from .complex import (Complex, ValidationReport, Violation, assemble_cone, pad_to_even_window,
                      validate_chain_map, validate_equivalence, validate_null_homotopy)
from .grothendieck import RelationReport, check_cone_relation, euler_characteristic
from .io import Certificate
from .matrix import GradedObject
from .witness import ConeNullHomotopy, Extraction, WitnessPair, check_witness_pair

logger = logging.getLogger(__name__)

NULL_HOMOTOPY = "id=dh+hd"
CONE_HOMOTOPY = "id=dH+Hd"
RL_IDENTITY = "RL=id"
LR_IDENTITY = "LR=id"
PHI_PSI = "phi psi - id = d H2 + H2 d"
PSI_PHI = "psi phi - id = d H1 + H1 d"
PSI_CHAIN_MAP = "-d1 h12 + h12 d2 = 0"
CONE_RELATION = "chi(cone(f)) = chi(A2) - chi(A1)"
INVARIANCE = "chi(A1) = chi(A2)"


def certify_rl_witness(c: Complex, h, pair: WitnessPair) -> Certificate:
    """Certificate for a null-homotopic complex and its R/L witness."""
    return Certificate(
        claim="complex is null-homotopic and its even and odd terms are isomorphic",
        identities=[NULL_HOMOTOPY, RL_IDENTITY, LR_IDENTITY],
        sections={"complex": c, "homotopy": h, "witness": pair},
        notes={"euler_characteristic": str(euler_characteristic(c))})


def certify_cone_null_homotopy(e, cone_homotopy: ConeNullHomotopy) -> Certificate:
    """Certificate for the null-homotopy of cone(phi) built from an equivalence."""
    return Certificate(
        claim="cone(phi) is null-homotopic",
        identities=[PHI_PSI, PSI_PHI, CONE_HOMOTOPY],
        sections={"equivalence": e, "homotopy": cone_homotopy},
        notes={"convention": cone_homotopy.convention.value})


def certify_extraction(cone_homotopy, extraction: Extraction) -> Certificate:
    """Certificate for an equivalence recovered from a cone null-homotopy."""
    return Certificate(
        claim="phi is a homotopy equivalence with inverse -h12",
        identities=[NULL_HOMOTOPY, PSI_CHAIN_MAP, PHI_PSI, PSI_PHI],
        sections={"homotopy": cone_homotopy, "equivalence": extraction},
        notes={"h1_sign": f"{extraction.h1_sign:+d}", "h2_sign": f"{extraction.h2_sign:+d}"})


def certify_cone_relation(f, report: RelationReport) -> Certificate:
    return Certificate(
        claim="Euler characteristic of a cone is the difference of the ends",
        identities=[CONE_RELATION],
        sections={"map": f, "lhs": report.lhs, "rhs": report.rhs})


def certify_equivalence_invariance(e, report: RelationReport) -> Certificate:
    """Certificate for chi(A1) = chi(A2), carrying the R/L witness of cone(phi)."""
    return Certificate(
        claim="homotopy equivalent complexes have equal Euler characteristics",
        identities=[PHI_PSI, PSI_PHI, RL_IDENTITY, LR_IDENTITY, INVARIANCE],
        sections={"equivalence": e, "witness": report.witness,
                  "chi_source": report.lhs, "chi_target": report.rhs})


def _section(cert: Certificate, name: str):
    if name not in cert.sections:
        raise KeyError(name)
    value = cert.sections[name]
    if isinstance(value, ConeNullHomotopy):
        return value.homotopy
    if isinstance(value, Extraction):
        return value.equivalence
    return value


def _single(identity: str, ok: bool, message: str = "") -> ValidationReport:
    report = ValidationReport(identity)
    if not ok:
        report.violations.append(Violation(0, identity, message=message))
    return report


def _relabel(report: ValidationReport, identity: str) -> ValidationReport:
    relabelled = ValidationReport(identity)
    relabelled.violations = [Violation(v.degree, identity, v.residual, v.identity)
                             for v in report.violations]
    return relabelled


def _witnessed_complex(cert: Certificate) -> Complex:
    if "complex" in cert.sections:
        return _section(cert, "complex")
    return assemble_cone(_section(cert, "equivalence").phi)


def _check_null_homotopy(cert: Certificate) -> ValidationReport:
    h = _section(cert, "homotopy")
    if "complex" in cert.sections and h.complex != _section(cert, "complex"):
        return _single(NULL_HOMOTOPY, False, "homotopy is on a different complex")
    if "complex" not in cert.sections and "equivalence" in cert.sections \
            and h.complex != assemble_cone(_section(cert, "equivalence").phi):
        return _single(NULL_HOMOTOPY, False, "homotopy is not on cone(phi)")
    return _relabel(validate_null_homotopy(h), NULL_HOMOTOPY)


def _check_cone_homotopy(cert: Certificate) -> ValidationReport:
    h = _section(cert, "homotopy")
    if h.complex != assemble_cone(_section(cert, "equivalence").phi):
        return _single(CONE_HOMOTOPY, False, "homotopy is not on cone(phi)")
    return _relabel(validate_null_homotopy(h), CONE_HOMOTOPY)


def _check_witness(identity: str) -> Callable[[Certificate], ValidationReport]:
    def check(cert: Certificate) -> ValidationReport:
        pair = _section(cert, "witness")
        padded = pad_to_even_window(_witnessed_complex(cert)).complex
        even = GradedObject.concat(padded.obj(j) for j in padded.degrees() if j % 2 == 0)
        odd = GradedObject.concat(padded.obj(j) for j in padded.degrees() if j % 2 == 1)
        if pair.R.source != even or pair.R.target != odd:
            return _single(identity, False, "witness does not match the complex")
        report = check_witness_pair(pair)
        result = ValidationReport(identity)
        result.violations = [v for v in report.violations if v.identity == identity]
        return result
    return check


def _check_equivalence(identity: str) -> Callable[[Certificate], ValidationReport]:
    def check(cert: Certificate) -> ValidationReport:
        report = validate_equivalence(_section(cert, "equivalence"))
        result = ValidationReport(identity)
        result.violations = [v for v in report.violations
                             if v.identity == identity or ":" in v.identity]
        return result
    return check


def _check_psi_chain_map(cert: Certificate) -> ValidationReport:
    return _relabel(validate_chain_map(_section(cert, "equivalence").psi), PSI_CHAIN_MAP)


def _check_cone_relation(cert: Certificate) -> ValidationReport:
    f = _section(cert, "map")
    if not validate_chain_map(f).ok:
        return _single(CONE_RELATION, False, "map is not a chain map")
    report = check_cone_relation(f, check_input=False)
    claimed = (_section(cert, "lhs"), _section(cert, "rhs"))
    return _single(CONE_RELATION, report.ok and claimed == (report.lhs, report.rhs),
                   report.describe())


def _check_invariance(cert: Certificate) -> ValidationReport:
    e = _section(cert, "equivalence")
    lhs, rhs = euler_characteristic(e.source), euler_characteristic(e.target)
    claimed = (_section(cert, "chi_source"), _section(cert, "chi_target"))
    return _single(INVARIANCE, lhs == rhs and claimed == (lhs, rhs), f"{lhs} vs {rhs}")


_CHECKS: Dict[str, Callable[[Certificate], ValidationReport]] = {
    NULL_HOMOTOPY: _check_null_homotopy,
    CONE_HOMOTOPY: _check_cone_homotopy,
    RL_IDENTITY: _check_witness(RL_IDENTITY),
    LR_IDENTITY: _check_witness(LR_IDENTITY),
    PHI_PSI: _check_equivalence(PHI_PSI),
    PSI_PHI: _check_equivalence(PSI_PHI),
    PSI_CHAIN_MAP: _check_psi_chain_map,
    CONE_RELATION: _check_cone_relation,
    INVARIANCE: _check_invariance,
}


def reverify(cert: Certificate) -> ValidationReport:
    """
    Recompute every identity a certificate names, from its sections only.

    Returns:
        ValidationReport with one or more violations per failing identity;
        unknown identities and missing sections count as failures
    """
    report = ValidationReport(f"certificate '{cert.claim}'")
    if not cert.identities:
        report.violations.append(Violation(0, "identities", message="certificate names no identity"))
    for identity in cert.identities:
        check = _CHECKS.get(identity)
        if check is None:
            report.violations.append(Violation(0, identity, message="unknown identity"))
            continue
        try:
            report.extend(check(cert))
        except KeyError as e:
            report.violations.append(Violation(0, identity, message=f"missing section {e}"))
        except AttributeError:
            report.violations.append(Violation(0, identity, message="section has the wrong kind"))
    logger.debug("reverified %d identities: %s", len(cert.identities),
                 "ok" if report.ok else "failed")
    return report

