import json
import os

import pytest

from src.cli import run
from src.report import SCHEMA_VERSION


@pytest.fixture
def fixture_path(fixtures_dir):
    def path(name):
        return os.path.join(fixtures_dir, name)
    return path


def run_json(capsys, *argv):
    status = run(list(argv) + ['--json'])
    out = capsys.readouterr().out
    return status, json.loads(out) if out.strip() else None


class TestValidate:
    def test_valid_file(self, fixture_path, capsys):
        status, report = run_json(capsys, 'validate', fixture_path('b4.fincat'))
        assert status == 0
        assert report['verdicts'] == {'category_laws': True, 'dagger_axioms': True,
                                      'anti_involution_axioms': True, 'positivity_axioms': True}
        assert report['witnesses']['declarations']['functors'] == ['Collapse', 'Neg']
        assert len(report['inputs'][0]['sha256']) == 64

    def test_broken_file(self, fixture_path, capsys):
        assert run(['validate', fixture_path('broken.fincat')]) == 2
        assert '9:5: UnresolvedReference' in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert run(['validate', str(tmp_path / 'nowhere.fincat')]) == 2


class TestChecks:
    def test_indefinite(self, fixture_path, capsys):
        status, report = run_json(capsys, 'indefinite', fixture_path('b4.fincat'), '--dagger', 'D')
        assert status == 1
        assert report['failed'] == 'indefinite'
        assert report['witnesses']['indefinite'] == {'object': 'x', 'a': '2'}

        status, report = run_json(capsys, 'indefinite', fixture_path('b3.fincat'), '--dagger', 'D')
        assert status == 0
        assert report['failed'] is None

    def test_triangles(self, fixture_path, capsys):
        status, report = run_json(capsys, 'triangles', fixture_path('b4.fincat'), '--name', 'TB4')
        assert status == 0
        assert report['verdicts'] == {'triangle_herm_k_after_u': True}

        status, report = run_json(capsys, 'triangles', fixture_path('b4.fincat'), '--name', 'D')
        assert status == 0
        assert report['verdicts'] == {'triangle_herm_k_after_u': True, 'triangle_k_after_t_u': True}

    def test_fixedpoints(self, fixture_path, capsys):
        status, report = run_json(capsys, 'fixedpoints', fixture_path('b4.fincat'), '--inv', 'TB4')
        assert status == 0
        assert report['witnesses']['fixed_points'] == [['x', '2'], ['x', 'id_x']]
        assert report['verdicts']['transfer_matches_unitary_classes']

        status, report = run_json(capsys, 'fixedpoints', fixture_path('b4.fincat'), '--inv', 'B4eta1')
        assert status == 0
        assert report['witnesses']['fixed_points'] == []

    def test_herm(self, fixture_path, capsys):
        status, report = run_json(capsys, 'herm', fixture_path('b4.fincat'), '--inv', 'TB4')
        assert status == 0
        assert report['witnesses']['objects'] == 2
        assert report['witnesses']['morphisms'] == 16

        status, report = run_json(capsys, 'herm', fixture_path('b4.fincat'), '--inv', 'TB4', '--positivity', 'P')
        assert status == 0
        assert report['witnesses']['objects'] == 1

    def test_positivity_on_another_involution(self, fixture_path, capsys):
        assert run(['herm', fixture_path('b4.fincat'), '--inv', 'B4eta1', '--positivity', 'P']) == 2
        assert 'SourceTargetMismatch' in capsys.readouterr().err

    def test_pi0u(self, fixture_path, capsys):
        status, report = run_json(capsys, 'pi0u', fixture_path('walk.fincat'), '--dagger', 'D')
        assert status == 0
        assert report['witnesses']['count'] == 1

    def test_dagger_equivalence(self, fixture_path, capsys):
        b4 = fixture_path('b4.fincat')
        status, report = run_json(capsys, 'equiv', b4, '--from', 'D', '--to', 'D', '--functor', 'Neg', '--dagger')
        assert status == 0
        assert report['witnesses']['unitary_witnesses'] == {'x': ['x', '1']}

        status, report = run_json(capsys, 'equiv', b4, '--from', 'D', '--to', 'D', '--functor', 'Collapse',
                                  '--dagger')
        assert status == 1
        assert report['failed'] == 'fully_faithful'

    def test_involutive_equivalence(self, fixture_path, capsys):
        status, report = run_json(capsys, 'equiv', fixture_path('b4.fincat'),
                                  '--from', 'TB4', '--to', 'TB4', '--functor', 'Neg')
        assert status == 0
        assert report['verdicts']['involutive_inverse_valid']
        assert report['witnesses']['quasi_inverse']['objects'] == {'x': 'x'}

    def test_corollary(self, fixture_path, capsys):
        status, report = run_json(capsys, 'corollary', fixture_path('b4.fincat'), '--source', 'DOne',
                                  '--target', 'D')
        assert status == 0
        assert report['witnesses']['fixed_points'] == 2
        assert report['witnesses']['dagger_functors'] == 1

    def test_biequivalence(self, fixture_path, capsys):
        status, report = run_json(capsys, 'biequivalence', fixture_path('b4.fincat'), '--dagger', 'D')
        assert status == 0
        assert report['verdicts'] == {'tp_unit_dagger_equivalence': True, 'tp_counit_pcat_equivalence': True}

    def test_text_output(self, fixture_path, capsys):
        assert run(['indefinite', fixture_path('b4.fincat'), '--dagger', 'D']) == 1
        out = capsys.readouterr().out
        assert '  FAIL  indefinite' in out
        assert 'failed: indefinite' in out

    def test_same_input_same_digest(self, fixture_path, capsys):
        reports = []
        for _ in range(2):
            _, report = run_json(capsys, 'fixedpoints', fixture_path('b4.fincat'), '--inv', 'TB4')
            del report['elapsed_seconds']
            reports.append(report)
        assert reports[0] == reports[1]


class TestGenerate:
    def test_generated_file_validates(self, tmp_path, capsys):
        target = tmp_path / 'b3.fincat'
        assert run(['gen', 'cyclic', 'order=3', '-o', str(target)]) == 0
        assert target.read_text().startswith('category B3 {')
        assert run(['validate', str(target)]) == 0

    def test_stdout(self, capsys):
        assert run(['gen', 'poset-antitone']) == 0
        assert 'involution Chain3rev on Chain3 {' in capsys.readouterr().out

    def test_bad_requests(self, capsys):
        assert run(['gen', 'hypercube']) == 2
        assert run(['gen', 'cyclic', 'order']) == 2
        assert run(['gen', 'matrix', 'maxdim=4']) == 2


class TestLedger:
    def test_runs_are_recorded(self, fixture_path, monkeypatch, capsys):
        monkeypatch.setenv('FINCAT_LEDGER', 'true')
        run(['validate', fixture_path('b4.fincat')])
        run(['indefinite', fixture_path('b4.fincat'), '--dagger', 'D'])
        run(['validate', fixture_path('broken.fincat')])
        capsys.readouterr()

        assert run(['report', '--json']) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary['schema_version'] == SCHEMA_VERSION
        assert summary['total_runs'] == 3
        assert summary['failures'] == 1
        assert summary['commands']['validate'] == {'runs': 2, 'failures': 0, 'errors': 1}

    def test_ledger_off(self, fixture_path, capsys):
        run(['validate', fixture_path('b4.fincat')])
        capsys.readouterr()
        assert run(['report', '--json']) == 0
        assert json.loads(capsys.readouterr().out)['total_runs'] == 0


def test_unknown_subcommand(capsys):
    assert run(['frobnicate']) == 2


def test_missing_required_option(fixture_path, capsys):
    assert run(['indefinite', fixture_path('b4.fincat')]) == 2
