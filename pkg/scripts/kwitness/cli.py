"""
Command-Line Interface

Batch commands over kwitness documents. Every command reads its inputs
(stdin for '-'), runs one library operation and writes a canonical
document, or a short report with --human. Witness commands emit a
certificate naming each identity they verified.

Exit codes: 0 success, 1 a well-formed input whose claim is false,
2 an input error, 130 interrupted.
"""

import argparse
from typing import Any, List, Optional, TextIO

from . import __version__
from .app import EXIT_INPUT_ERROR, CommandResult, KWitnessApp
from .certify import (certify_cone_null_homotopy, certify_cone_relation,
                      certify_equivalence_invariance, certify_extraction,
                      certify_rl_witness, reverify)
from .complex import (Complex, HomotopyEquivalence, NullHomotopy, cone, direct_sum_complex,
                      direct_sum_null_homotopy, shift, shift_null_homotopy, validate_equivalence,
                      validate_null_homotopy)
from .config import LOG_LEVELS
from .errors import ClaimFailedError, DocumentValidationError
from .generator import (GENERATOR_FIELDS, gen_chain_map, gen_complex, gen_contractible,
                        gen_equivalence, gen_params_from_settings)
from .grothendieck import check_cone_relation, check_equivalence_invariance, euler_characteristic
from .io import Certificate, Document, PayloadKind
from .scalar import RingDescriptor
from .witness import (alphas, build_rl_witness, check_witness_pair, cone_null_homotopy,
                      extract_equivalence)


def _option(args: argparse.Namespace, name: str, default: Any = None) -> Any:
    return getattr(args, name, default)


def _ring_flag(args: argparse.Namespace) -> Optional[RingDescriptor]:
    text = _option(args, 'ring')
    return RingDescriptor.parse(text) if text else None


def _expect(doc: Document, path: str, *kinds: PayloadKind) -> Any:
    if doc.kind not in kinds:
        expected = " or ".join(k.value for k in kinds)
        raise DocumentValidationError(f"expected {expected}, got {doc.kind.value}",
                                      path=f"{path}: kind")
    return doc.payload


def _describe_complex(c: Complex) -> str:
    if not c.objects:
        return f"zero complex over {c.ring}"
    ranks = " ".join(str(o.rank) for o in c.objects)
    return f"complex over {c.ring} in degrees {c.min_degree}..{c.max_degree}, ranks {ranks}"


def _describe_certificate(cert: Certificate) -> str:
    lines = [f"verified: {cert.claim}"]
    lines += [f"  {identity}" for identity in cert.identities]
    lines += [f"  {name} = {value}" for name, value in sorted(cert.notes.items())]
    return "\n".join(lines)


def _certificate_result(cert: Certificate, ring: RingDescriptor) -> CommandResult:
    return CommandResult(_describe_certificate(cert), cert, ring)


def _gen_params(app: KWitnessApp, args: argparse.Namespace, ring: Optional[RingDescriptor] = None):
    overrides = {name: _option(args, name) for name in GENERATOR_FIELDS}
    return gen_params_from_settings(app.settings, ring=ring or _ring_flag(args), **overrides)


# -- commands ---------------------------------------------------------------

def cmd_validate(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    """Check a document; identities claimed by homotopies, witnesses and certificates too."""
    doc = app.read_document(args.input, _ring_flag(args))
    checks = {
        PayloadKind.NULL_HOMOTOPY: validate_null_homotopy,
        PayloadKind.EQUIVALENCE: validate_equivalence,
        PayloadKind.WITNESS_PAIR: check_witness_pair,
        PayloadKind.CERTIFICATE: reverify,
    }
    check = checks.get(doc.kind)
    if check is None:
        return CommandResult(f"{doc.kind.value} over {doc.ring}: ok", doc.payload, doc.ring)
    report = check(doc.payload)
    report.raise_for(ClaimFailedError)
    return CommandResult(report.describe(), doc.payload, doc.ring)


def cmd_cone(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    result = cone(_expect(doc, args.input, PayloadKind.CHAIN_MAP))
    return CommandResult(_describe_complex(result), result, doc.ring)


def cmd_shift(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    value = _expect(doc, args.input, PayloadKind.COMPLEX, PayloadKind.NULL_HOMOTOPY)
    if doc.kind is PayloadKind.COMPLEX:
        result = shift(value, args.shift_by)
        return CommandResult(_describe_complex(result), result, doc.ring)
    validate_null_homotopy(value).raise_for(ClaimFailedError)
    shifted = shift_null_homotopy(value, args.shift_by)
    return CommandResult(f"null-homotopy of {_describe_complex(shifted.complex)}", shifted, doc.ring)


def cmd_sum(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    ring = _ring_flag(args)
    first = app.read_document(args.first, ring)
    second = app.read_document(args.second, ring or first.ring)
    a = _expect(first, args.first, PayloadKind.COMPLEX, PayloadKind.NULL_HOMOTOPY)
    b = _expect(second, args.second, first.kind)
    if first.kind is PayloadKind.COMPLEX:
        result = direct_sum_complex(a, b)
        return CommandResult(_describe_complex(result), result, first.ring)
    validate_null_homotopy(a).raise_for(ClaimFailedError)
    validate_null_homotopy(b).raise_for(ClaimFailedError)
    total = direct_sum_null_homotopy(a, b)
    return CommandResult(f"null-homotopy of {_describe_complex(total.complex)}", total, first.ring)


def cmd_chi(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    k = euler_characteristic(_expect(doc, args.input, PayloadKind.COMPLEX))
    return CommandResult(str(k), k, doc.ring)


def cmd_witness_rl(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    """R/L witness from a null-homotopy document, or from a complex and its null-homotopy."""
    ring = _ring_flag(args)
    if len(args.inputs) > 2:
        raise DocumentValidationError("expected a null-homotopy, or a complex and a null-homotopy",
                                      path="inputs")
    if len(args.inputs) == 2:
        complex_doc = app.read_document(args.inputs[0], ring)
        c = _expect(complex_doc, args.inputs[0], PayloadKind.COMPLEX)
        h_doc = app.read_document(args.inputs[1], ring or complex_doc.ring)
        h = _expect(h_doc, args.inputs[1], PayloadKind.NULL_HOMOTOPY)
        if h.complex != c:
            raise DocumentValidationError("null-homotopy is on a different complex",
                                          path=f"{args.inputs[1]}: payload.complex")
    else:
        h_doc = app.read_document(args.inputs[0], ring)
        h = _expect(h_doc, args.inputs[0], PayloadKind.NULL_HOMOTOPY)
        c = h.complex
    pair = build_rl_witness(c, h)
    return _certificate_result(certify_rl_witness(c, h, pair), h_doc.ring)


def cmd_cone_nullhomotopy(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    e = _expect(doc, args.input, PayloadKind.EQUIVALENCE)
    return _certificate_result(certify_cone_null_homotopy(e, cone_null_homotopy(e)), doc.ring)


def cmd_extract_inverse(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    """
    Homotopy inverse of phi from a null-homotopy of cone(phi).

    Accepts the certificate written by cone-nullhomotopy, or a chain map
    followed by a null-homotopy of its cone.
    """
    ring = _ring_flag(args)
    if len(args.inputs) > 2:
        raise DocumentValidationError("expected a certificate, or a chain map and a null-homotopy",
                                      path="inputs")
    if len(args.inputs) == 2:
        phi_doc = app.read_document(args.inputs[0], ring)
        phi = _expect(phi_doc, args.inputs[0], PayloadKind.CHAIN_MAP)
        h_doc = app.read_document(args.inputs[1], ring or phi_doc.ring)
        h = _expect(h_doc, args.inputs[1], PayloadKind.NULL_HOMOTOPY)
    else:
        h_doc = app.read_document(args.inputs[0], ring)
        cert = _expect(h_doc, args.inputs[0], PayloadKind.CERTIFICATE)
        e, h = cert.sections.get("equivalence"), cert.sections.get("homotopy")
        if not isinstance(e, HomotopyEquivalence) or not isinstance(h, NullHomotopy):
            raise DocumentValidationError("certificate needs equivalence and homotopy sections",
                                          path=f"{args.inputs[0]}: payload.sections")
        phi = e.phi
    extraction = extract_equivalence(h, phi)
    return _certificate_result(certify_extraction(h, extraction), h_doc.ring)


def cmd_check_cone_relation(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    f = _expect(doc, args.input, PayloadKind.CHAIN_MAP)
    report = check_cone_relation(f)
    if not report.ok:
        raise ClaimFailedError(report.describe(), identity=report.relation)
    return _certificate_result(certify_cone_relation(f, report), doc.ring)


def cmd_check_equivalence(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    doc = app.read_document(args.input, _ring_flag(args))
    e = _expect(doc, args.input, PayloadKind.EQUIVALENCE)
    report = check_equivalence_invariance(e)
    if not report.ok:
        raise ClaimFailedError(report.describe(), identity=report.relation)
    return _certificate_result(certify_equivalence_invariance(e, report), doc.ring)


def cmd_gen_contractible(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    p = _gen_params(app, args)
    c, h = gen_contractible(p, perturb=args.perturb)
    return CommandResult(f"contractible {_describe_complex(c)}", h, p.ring)


def cmd_gen_equivalence(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    base = None
    ring = _ring_flag(args)
    if args.base:
        base_doc = app.read_document(args.base, ring)
        base = _expect(base_doc, args.base, PayloadKind.COMPLEX)
        ring = base_doc.ring
    p = _gen_params(app, args, ring)
    e = gen_equivalence(p, base)
    text = f"equivalence from {_describe_complex(e.source)}\n  to {_describe_complex(e.target)}"
    return CommandResult(text, e, p.ring)


def cmd_gen_chain_map(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    ring = _ring_flag(args)
    if len(args.inputs) not in (0, 2):
        raise DocumentValidationError("expected no inputs, or a source and a target complex",
                                      path="inputs")
    if args.inputs:
        source_doc = app.read_document(args.inputs[0], ring)
        a = _expect(source_doc, args.inputs[0], PayloadKind.COMPLEX)
        target_doc = app.read_document(args.inputs[1], ring or source_doc.ring)
        b = _expect(target_doc, args.inputs[1], PayloadKind.COMPLEX)
        p = _gen_params(app, args, source_doc.ring)
    else:
        p = _gen_params(app, args)
        a = gen_complex(p, "chain_map:source")
        b = gen_complex(p, "chain_map:target")
    f = gen_chain_map(p, a, b)
    text = f"chain map from {_describe_complex(a)}\n  to {_describe_complex(b)}"
    return CommandResult(text, f, p.ring)


def cmd_alphas(app: KWitnessApp, args: argparse.Namespace) -> CommandResult:
    return CommandResult(str(alphas(args.n)))


# -- parser -----------------------------------------------------------------

def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return value


def _common_options() -> argparse.ArgumentParser:
    """Global flags, accepted before or after the command name."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', default=argparse.SUPPRESS,
                        help='Configuration file (default: kwitness_config.yml)')
    common.add_argument('--debug', action='store_true', default=argparse.SUPPRESS,
                        help='Enable debug mode with verbose logging')
    common.add_argument('--log-level', choices=list(LOG_LEVELS), default=argparse.SUPPRESS,
                        help='Set logging level (default: from config, else WARNING)')
    common.add_argument('--human', action='store_true', default=argparse.SUPPRESS,
                        help='Write a human-readable report instead of a document')
    common.add_argument('--out', metavar='PATH', default=argparse.SUPPRESS,
                        help='Write output to PATH instead of stdout')
    common.add_argument('--ring', metavar='RING', default=argparse.SUPPRESS,
                        help='Ring: ZZ, QQ, ZZ/p, ZZ[x] or ZZ[x:d] (default: from config, else ZZ)')
    return common


def _generator_options() -> argparse.ArgumentParser:
    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument('--seed', type=_nonnegative, help='Generator seed')
    gen.add_argument('--max-blocks', type=int, help='Most elementary blocks per complex')
    gen.add_argument('--max-rank', type=int, help='Largest block rank')
    gen.add_argument('--max-shift', type=int, help='Largest cohomological offset')
    gen.add_argument('--max-grading', type=int, help='Largest internal grading')
    gen.add_argument('--entry-bound', type=int, help='Largest random entry magnitude')
    gen.add_argument('--conjugation-steps', type=int, help='Elementary automorphisms per term')
    return gen


def build_parser() -> argparse.ArgumentParser:
    """Build the kwitness argument parser."""
    common = _common_options()
    gen = _generator_options()
    parser = argparse.ArgumentParser(
        prog='kwitness',
        parents=[common],
        description="kwitness - verified witnesses for homotopy invariance of Euler characteristics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    kwitness alphas --n 4
    kwitness gen-contractible --seed 7 | kwitness witness-rl
    kwitness gen-equivalence | kwitness cone-nullhomotopy | kwitness extract-inverse
    kwitness validate --human complex.json
        """
    )
    parser.add_argument('--version', action='version', version=f'kwitness {__version__}')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    def add(name: str, handler, help_text: str, generator: bool = False):
        parents = [common, gen] if generator else [common]
        sub = commands.add_parser(name, parents=parents, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = add('validate', cmd_validate, 'Validate a document and any identity it claims')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('cone', cmd_cone, 'Mapping cone of a chain map')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('shift', cmd_shift, 'Shift a complex or a null-homotopy')
    sub.add_argument('input', nargs='?', default='-')
    sub.add_argument('--shift-by', type=int, default=1, metavar='M', help='Shift amount (default: 1)')

    sub = add('sum', cmd_sum, 'Direct sum of two complexes or two null-homotopies')
    sub.add_argument('first')
    sub.add_argument('second')

    sub = add('chi', cmd_chi, 'Euler characteristic of a complex')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('witness-rl', cmd_witness_rl, 'R/L witness for a null-homotopic complex')
    sub.add_argument('inputs', nargs='*', default=['-'])

    sub = add('cone-nullhomotopy', cmd_cone_nullhomotopy,
              'Null-homotopy of cone(phi) from a homotopy equivalence')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('extract-inverse', cmd_extract_inverse,
              'Homotopy inverse of phi from a null-homotopy of cone(phi)')
    sub.add_argument('inputs', nargs='*', default=['-'])

    sub = add('check-cone-relation', cmd_check_cone_relation,
              'Check chi(cone(f)) = chi(target) - chi(source)')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('check-equivalence', cmd_check_equivalence,
              'Check that a homotopy equivalence preserves the Euler characteristic')
    sub.add_argument('input', nargs='?', default='-')

    sub = add('gen-contractible', cmd_gen_contractible, 'Generate a contractible complex',
              generator=True)
    sub.add_argument('--perturb', action='store_true',
                     help='Add dk - kd to the null-homotopy so that h h is nonzero')

    sub = add('gen-equivalence', cmd_gen_equivalence, 'Generate a homotopy equivalence',
              generator=True)
    sub.add_argument('--base', metavar='FILE', help='Source complex (default: generated)')

    sub = add('gen-chain-map', cmd_gen_chain_map, 'Generate a chain map', generator=True)
    sub.add_argument('inputs', nargs='*', default=[])

    sub = add('alphas', cmd_alphas, 'Print the alpha coefficients up to n')
    sub.add_argument('--n', type=_nonnegative, required=True)

    return parser


def main(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
         stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Run one kwitness command.

    Args:
        argv: Command-line arguments without the program name (default: sys.argv[1:])
        stdin: Input stream for '-' (default: sys.stdin)
        stdout: Output stream (default: sys.stdout)
        stderr: Stream for logs and error reports (default: sys.stderr)

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code is None or isinstance(e.code, int):
            return e.code or 0
        return EXIT_INPUT_ERROR

    app = KWitnessApp(
        debug_mode=_option(args, 'debug', False),
        log_level=_option(args, 'log_level'),
        config_path=_option(args, 'config'),
        human=True if _option(args, 'human') else None,
        out_path=_option(args, 'out'),
        stdin=stdin, stdout=stdout, stderr=stderr,
    )
    try:
        return app.run(lambda a: args.handler(a, args))
    finally:
        app.cleanup()
