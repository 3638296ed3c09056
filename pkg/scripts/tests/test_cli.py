"""
Tests for the kwitness command line.

Commands run in-process through cli.main with in-memory streams and a
configuration path inside a temporary directory.
"""

import contextlib
import io
import json
import os
import shutil
import sys
import tempfile
import unittest

import yaml

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from kwitness import __version__
from kwitness.certify import reverify
from kwitness.cli import build_parser, main
from kwitness.io import PayloadKind, parse

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture_path(*parts):
    return os.path.join(FIXTURES, *parts)


def read_fixture(*parts):
    with open(fixture_path(*parts), 'r', encoding='utf-8', newline='') as f:
        return f.read()


class CliTestCase(unittest.TestCase):
    """Runs commands against a private configuration file."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_path = os.path.join(self.temp_dir, 'kwitness_config.yml')

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def run_cli(self, *argv, stdin_text=""):
        stdout, stderr = io.StringIO(), io.StringIO()
        code = main(['--config', self.config_path] + list(argv),
                    stdin=io.StringIO(stdin_text), stdout=stdout, stderr=stderr)
        return code, stdout.getvalue(), stderr.getvalue()

    def error_of(self, stderr):
        return json.loads(stderr.strip().splitlines()[-1])


class TestBasics(CliTestCase):

    def test_alphas(self):
        code, out, _ = self.run_cli('alphas', '--n', '4')
        self.assertEqual(code, 0)
        self.assertEqual(out, "1 -1 2 -5 14\n")

    def test_negative_n_is_a_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()):
            code, out, _ = self.run_cli('alphas', '--n', '-1')
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_version(self):
        captured = io.StringIO()
        with contextlib.redirect_stdout(captured):
            code = main(['--version'])
        self.assertEqual(code, 0)
        self.assertIn(f"kwitness {__version__}", captured.getvalue())

    def test_command_required(self):
        with contextlib.redirect_stderr(io.StringIO()):
            self.assertEqual(main([]), 2)

    def test_parser_lists_every_command(self):
        help_text = build_parser().format_help()
        for command in ['validate', 'cone', 'shift', 'sum', 'chi', 'witness-rl',
                        'cone-nullhomotopy', 'extract-inverse', 'check-cone-relation',
                        'check-equivalence', 'gen-contractible', 'gen-equivalence',
                        'gen-chain-map', 'alphas']:
            self.assertIn(command, help_text)


class TestDocumentCommands(CliTestCase):
    """Outputs compared byte for byte with golden files."""

    def test_witness_rl_on_elementary_fixture(self):
        code, out, err = self.run_cli('witness-rl', fixture_path('golden', 'elementary_complex.json'),
                                      fixture_path('golden', 'elementary_null_homotopy.json'))
        self.assertEqual(code, 0, err)
        self.assertEqual(out, read_fixture('golden', 'elementary_rl_certificate.json'))

    def test_witness_rl_from_stdin(self):
        code, out, _ = self.run_cli(
            'witness-rl', stdin_text=read_fixture('golden', 'elementary_null_homotopy.json'))
        self.assertEqual(code, 0)
        cert = parse(out).payload
        self.assertEqual(cert.sections['witness'].R.entries, ((1,),))

    def test_shift(self):
        code, out, _ = self.run_cli('shift', fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 0)
        self.assertEqual(out, read_fixture('golden', 'shifted_elementary_complex.json'))

    def test_cone(self):
        code, out, _ = self.run_cli('cone', fixture_path('golden', 'identity_chain_map.json'))
        self.assertEqual(code, 0)
        self.assertEqual(out, read_fixture('golden', 'cone_of_identity.json'))

    def test_chi_human(self):
        code, out, _ = self.run_cli('chi', '--human', fixture_path('golden', 'graded_complex.json'))
        self.assertEqual(code, 0)
        self.assertEqual(out, "-q + 1\n")

    def test_sum(self):
        path = fixture_path('golden', 'elementary_complex.json')
        code, out, _ = self.run_cli('sum', path, path)
        self.assertEqual(code, 0)
        total = parse(out).payload
        self.assertEqual([o.rank for o in total.objects], [2, 2])

    def test_validate_human(self):
        code, out, _ = self.run_cli('validate', '--human',
                                    fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 0)
        self.assertEqual(out, "complex over ZZ: ok\n")

    def test_relation_checks(self):
        code, out, _ = self.run_cli('check-cone-relation',
                                    fixture_path('golden', 'identity_chain_map.json'))
        self.assertEqual(code, 0)
        self.assertTrue(reverify(parse(out).payload).ok)
        code, out, _ = self.run_cli('check-equivalence',
                                    fixture_path('golden', 'contraction_equivalence.json'))
        self.assertEqual(code, 0)
        self.assertTrue(reverify(parse(out).payload).ok)

    def test_out_file(self):
        target = os.path.join(self.temp_dir, 'shifted.json')
        code, out, _ = self.run_cli('shift', '--out', target,
                                    fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 0)
        self.assertEqual(out, "")
        with open(target, 'r', encoding='utf-8', newline='') as f:
            self.assertEqual(f.read(), read_fixture('golden', 'shifted_elementary_complex.json'))


class TestPipelines(CliTestCase):
    """Generated instances flow through the witness commands."""

    def test_gen_contractible_into_witness_rl(self):
        for seed in ['0', '3', '17']:
            code, generated, _ = self.run_cli('gen-contractible', '--seed', seed)
            self.assertEqual(code, 0)
            code, out, err = self.run_cli('witness-rl', stdin_text=generated)
            self.assertEqual(code, 0, err)
            self.assertTrue(reverify(parse(out).payload).ok)

    def test_perturbed_contractible_into_witness_rl(self):
        for seed in ['1', '4']:
            code, generated, _ = self.run_cli('gen-contractible', '--perturb', '--seed', seed,
                                              '--max-shift', '3', '--max-blocks', '4')
            self.assertEqual(code, 0)
            code, out, err = self.run_cli('witness-rl', stdin_text=generated)
            self.assertEqual(code, 0, err)
            self.assertTrue(reverify(parse(out).payload).ok)

    def test_equivalence_cone_extract(self):
        code, generated, _ = self.run_cli('gen-equivalence', '--seed', '2', '--ring', 'ZZ[x]')
        self.assertEqual(code, 0)
        code, cone_cert, err = self.run_cli('cone-nullhomotopy', stdin_text=generated)
        self.assertEqual(code, 0, err)
        code, out, err = self.run_cli('extract-inverse', stdin_text=cone_cert)
        self.assertEqual(code, 0, err)
        doc = parse(out)
        self.assertIs(doc.kind, PayloadKind.CERTIFICATE)
        self.assertEqual(str(doc.ring), "ZZ[x]")
        self.assertTrue(reverify(doc.payload).ok)

    def test_gen_equivalence_on_base(self):
        code, out, _ = self.run_cli('gen-equivalence', '--base',
                                    fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 0)
        e = parse(out).payload
        self.assertEqual(e.source, parse(read_fixture('golden', 'elementary_complex.json')).payload)

    def test_gen_chain_map_into_cone(self):
        code, generated, _ = self.run_cli('gen-chain-map', '--seed', '5')
        self.assertEqual(code, 0)
        code, _, _ = self.run_cli('cone', stdin_text=generated)
        self.assertEqual(code, 0)

    def test_same_seed_same_bytes(self):
        first = self.run_cli('gen-equivalence', '--seed', '9')[1]
        second = self.run_cli('gen-equivalence', '--seed', '9')[1]
        self.assertEqual(first, second)

    def test_config_supplies_defaults(self):
        with open(self.config_path, 'w') as f:
            yaml.dump({'defaults': {'seed': 5, 'ring': 'QQ'}}, f)
        from_config = self.run_cli('gen-contractible')[1]
        from_flags = self.run_cli('gen-contractible', '--seed', '5', '--ring', 'QQ')[1]
        self.assertEqual(from_config, from_flags)
        self.assertEqual(str(parse(from_config).ring), "QQ")


class TestStartupLogging(CliTestCase):
    """Configuration messages and log file problems surface through the configured handlers."""

    def write_config(self, data):
        with open(self.config_path, 'w') as f:
            yaml.dump(data, f)

    def test_config_warnings_use_the_log_format(self):
        with open(self.config_path, 'w') as f:
            f.write("defaults: [unclosed\n")
        code, _, err = self.run_cli('alphas', '--n', '1')
        self.assertEqual(code, 0)
        self.assertIn("kwitness.config - WARNING - YAML parsing error", err)
        self.assertIn("kwitness.config - WARNING - Using built-in default configuration", err)

    def test_config_warnings_reach_the_log_file(self):
        log_path = os.path.join(self.temp_dir, 'kw.log')
        self.write_config({'logging': {'log_file': log_path}, 'extra': {}})
        code, _, _ = self.run_cli('alphas', '--n', '1')
        self.assertEqual(code, 0)
        with open(log_path, 'r', encoding='utf-8') as f:
            self.assertIn("Ignoring unknown configuration section: extra", f.read())

    def test_unwritable_log_file_is_input_error(self):
        self.write_config({'logging': {'log_file': os.path.join(self.temp_dir, 'absent', 'kw.log')}})
        code, out, err = self.run_cli('alphas', '--n', '2')
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        report = self.error_of(err)
        self.assertEqual(report['error'], 'FileNotFoundError')
        self.assertEqual(report['exit_code'], 2)


class TestFailures(CliTestCase):
    """Exit 1 for false claims, exit 2 for input errors, with a located report."""

    def test_invalid_complex_is_input_error(self):
        code, out, err = self.run_cli('validate', fixture_path('corrupted', 'd_squared_nonzero.json'))
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        report = self.error_of(err)
        self.assertEqual(report['error'], 'DocumentValidationError')
        self.assertEqual(report['degree'], 0)
        self.assertEqual(report['path'], 'payload')
        self.assertEqual(report['exit_code'], 2)

    def test_false_null_homotopy_is_claim_failure(self):
        path = fixture_path('corrupted', 'false_null_homotopy.json')
        code, out, err = self.run_cli('validate', path)
        self.assertEqual(code, 1)
        report = self.error_of(err)
        self.assertEqual(report['identity'], 'id=dh+hd')
        self.assertEqual(report['degree'], 0)

        code, out, err = self.run_cli('witness-rl', path)
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertEqual(self.error_of(err)['error'], 'NotNullHomotopicError')

    def test_broken_witness_pair(self):
        code, _, err = self.run_cli('validate', fixture_path('corrupted', 'broken_witness_pair.json'))
        self.assertEqual(code, 1)
        self.assertEqual(self.error_of(err)['identity'], 'RL=id')

    def test_flipped_cone_block(self):
        code, out, err = self.run_cli('extract-inverse',
                                      fixture_path('golden', 'identity_chain_map.json'),
                                      fixture_path('corrupted', 'flipped_cone_homotopy.json'))
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        report = self.error_of(err)
        self.assertEqual(report['degree'], -1)
        self.assertEqual(report['identity'], 'id=dh+hd')

    def test_syntax_error_reports_line(self):
        code, _, err = self.run_cli('validate', fixture_path('corrupted', 'truncated.json'))
        self.assertEqual(code, 2)
        self.assertIn('line', self.error_of(err))

    def test_ring_mismatch(self):
        code, _, err = self.run_cli('validate', '--ring', 'QQ',
                                    fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 2)
        self.assertEqual(self.error_of(err)['error'], 'RingMismatchError')

    def test_wrong_kind(self):
        code, _, err = self.run_cli('cone', fixture_path('golden', 'elementary_complex.json'))
        self.assertEqual(code, 2)
        self.assertIn('expected chain_map', self.error_of(err)['message'])

    def test_missing_file(self):
        code, _, err = self.run_cli('chi', os.path.join(self.temp_dir, 'absent.json'))
        self.assertEqual(code, 2)
        self.assertEqual(self.error_of(err)['error'], 'FileNotFoundError')

    def test_stdin_only_once(self):
        text = read_fixture('golden', 'elementary_complex.json')
        code, out, err = self.run_cli('sum', '-', '-', stdin_text=text)
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_wrong_input_count(self):
        path = fixture_path('golden', 'elementary_complex.json')
        code, _, _ = self.run_cli('gen-chain-map', path)
        self.assertEqual(code, 2)

    def test_human_error(self):
        code, _, err = self.run_cli('validate', '--human',
                                    fixture_path('corrupted', 'd_squared_nonzero.json'))
        self.assertEqual(code, 2)
        self.assertTrue(err.strip().splitlines()[-1].startswith('error: payload: '))


if __name__ == '__main__':
    unittest.main()
