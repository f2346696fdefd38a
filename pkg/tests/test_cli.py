import json
import numpy as np
import pytest
from liesym import cli
from liesym.config import SEED_ENV_VAR
from liesym.enum import OutputFormat


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_lines(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]




class TestClassify:
    def test_symmetric_normal_form(self, capsys):
        code, out, _ = run(capsys, 'classify', '--group', 'E0tilde2', '--mu', '1', '--nu', '2')
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['locally_symmetric'] is True
        assert record['solution_family'] == 'Flat'
        assert len(record['witness_P']) == 3

    def test_squashed_sphere(self, capsys):
        code, out, _ = run(capsys, 'classify', '--group', 'SU2', '--lambda', '2', '--mu', '1', '--nu', '1')
        assert code == cli.EXIT_OK
        assert json_lines(out)[0]['locally_symmetric'] is False

    def test_json_record(self, capsys, tmp_path):
        path = tmp_path / 'algebra.json'
        path.write_text(json.dumps({'constants': [], 'metric': np.eye(3).tolist()}))
        code, out, _ = run(capsys, 'classify', '--json', str(path))
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['locally_symmetric'] is True
        assert record['residual'] == 0.0

    def test_json_list(self, capsys, tmp_path):
        path = tmp_path / 'algebras.json'
        path.write_text(json.dumps([
            {'group': 'GI', 'nu': 0.3},
            {'group': 'G0', 'mu': 1, 'nu': 1},
            {'constants': [[1, 2, 3, 1.0], [2, 3, 1, 1.0], [3, 1, 2, 1.0]]},
        ]))
        code, out, _ = run(capsys, 'classify', '--json', str(path))
        assert code == cli.EXIT_OK
        assert [r['locally_symmetric'] for r in json_lines(out)] == [True, False, True]

    def test_out_of_range(self, capsys):
        code, out, err = run(capsys, 'classify', '--group', 'E0tilde2', '--mu', '2', '--nu', '1')
        assert code == cli.EXIT_USAGE
        assert out == ""
        assert "mu" in err

    def test_missing_source(self, capsys):
        code, _, err = run(capsys, 'classify')
        assert code == cli.EXIT_USAGE
        assert "--group" in err

    def test_unreadable_json(self, capsys, tmp_path):
        code, _, _ = run(capsys, 'classify', '--json', str(tmp_path / 'missing.json'))
        assert code == cli.EXIT_USAGE

    def test_csv_rejected(self, capsys):
        code, _, err = run(capsys, 'classify', '--group', 'GI', '--nu', '1', '--format', 'csv')
        assert code == cli.EXIT_USAGE
        assert "geodesic" in err

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / 'verdict.json'
        code, out, _ = run(capsys, 'classify', '--group', 'GI', '--nu', '4', '--out', str(target))
        assert code == cli.EXIT_OK
        assert out == ""
        assert json_lines(target.read_text())[0]['locally_symmetric'] is True




class TestCurvature:
    def test_round_sphere(self, capsys):
        code, out, _ = run(capsys, 'curvature', '--group', 'SU2', '--lambda', '1', '--mu', '1', '--nu', '1')
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['kind'] == 'Unimodular'
        assert record['sectional'] == pytest.approx([-0.25, -0.25, -0.25])
        assert record['locally_symmetric'] is True
        assert record['family']['family'] == 'SU2'

    def test_group_only(self, capsys):
        code, out, _ = run(capsys, 'curvature', '--group', 'GD', '--D', '3')
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['kind'] == 'NonUnimodular'
        assert record['family']['D'] == pytest.approx(3.0)

    def test_flat_json_record(self, capsys, tmp_path):
        path = tmp_path / 'algebra.json'
        path.write_text(json.dumps({'group': 'E0tilde2', 'mu': 1, 'nu': 2}))
        code, out, _ = run(capsys, 'curvature', '--json', str(path))
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['sectional'] == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
        assert record['residual'] <= 1e-12

    def test_not_a_lie_algebra(self, capsys, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text(json.dumps({'constants': [[1, 2, 3, 1.0], [1, 3, 3, 1.0], [2, 3, 1, 1.0]]}))
        code, out, err = run(capsys, 'curvature', '--json', str(path))
        assert code == cli.EXIT_USAGE
        assert out == ""
        assert "liesym: error" in err




class TestGeodesic:
    def test_csv(self, capsys):
        code, out, err = run(capsys, 'geodesic', '--nu', '1', '--v1', '1', '--v2', '2', '--v3', '3', '--t-end', '1')
        assert code == cli.EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "t,x,y,s,alpha1,alpha2,alpha3"
        t, x, y, s = map(float, lines[-1].split(',')[:4])
        assert (t, x, y, s) == pytest.approx((1.0, 1.0, 2.0, 3.0), abs=1e-9)
        summary = json.loads(err.strip().splitlines()[-1])
        assert summary['max_deviation'] <= 1e-8

    def test_json(self, capsys):
        code, out, _ = run(capsys, 'geodesic', '--nu', '4', '--v1', '1', '--t-end', '0.5', '--step', '0.1', '--format', 'json')
        assert code == cli.EXIT_OK
        records = json_lines(out)
        assert len(records) == 7
        assert records[-2]['x'] == pytest.approx(0.5)
        assert records[-2]['y'] == pytest.approx(0.0)
        assert records[-1]['samples'] == 6

    @pytest.mark.parametrize('step', ['0', '-0.1'])
    def test_invalid_step(self, capsys, step):
        code, _, err = run(capsys, 'geodesic', '--nu', '1', '--v1', '1', f'--step={step}')
        assert code == cli.EXIT_USAGE
        assert "step" in err

    def test_missing_nu(self, capsys):
        code, _, _ = run(capsys, 'geodesic', '--v1', '1')
        assert code == cli.EXIT_USAGE




class TestSymmetry:
    def test_consistent(self, capsys):
        code, out, _ = run(capsys, 'symmetry', '--nu', '0.25', '--x', '1', '--s', '1')
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['consistent'] is True
        assert record['symmetric_space'] is True
        assert len(record['images']) == 7

    def test_inconsistent(self, capsys):
        code, out, _ = run(capsys, 'symmetry', '--nu', '2', '--x', '1', '--s', '1', '--lifts', '1')
        assert code == cli.EXIT_OK
        (record,) = json_lines(out)
        assert record['consistent'] is False
        assert record['lifts'] == [-1, 0, 1]

    def test_angle_out_of_range(self, capsys):
        code, _, _ = run(capsys, 'symmetry', '--nu', '2', '--s', '4')
        assert code == cli.EXIT_USAGE




class TestVerifyPaper:
    def test_pass(self, capsys):
        code, out, _ = run(capsys, 'verify-paper', '--only', 'invariant-d,exp-log-roundtrip')
        assert code == cli.EXIT_OK
        data = json.loads(out)
        assert data['passed'] is True
        assert [c['check_id'] for c in data['checks']] == ['exp-log-roundtrip', 'invariant-d']

    def test_fail(self, capsys, caplog):
        code, out, _ = run(capsys, 'verify-paper', '--only', 'symmetry-properties', '--tol', '1e-15')
        assert code == cli.EXIT_FAILED
        assert json.loads(out)['passed'] is False
        assert "check symmetry-properties failed" in caplog.text

    def test_deterministic(self, capsys):
        _, first, _ = run(capsys, 'verify-paper', '--only', 'exp-log-roundtrip', '--seed', '5')
        _, second, _ = run(capsys, 'verify-paper', '--only', 'exp-log-roundtrip', '--seed', '5')
        assert first == second
        assert json.loads(first)['seed'] == 5

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, '11')
        _, out, _ = run(capsys, 'verify-paper', '--only', 'invariant-d')
        assert json.loads(out)['seed'] == 11

    def test_bad_seed_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, 'eleven')
        code, _, err = run(capsys, 'verify-paper', '--only', 'invariant-d')
        assert code == cli.EXIT_USAGE
        assert SEED_ENV_VAR in err

    def test_unknown_check(self, capsys):
        code, _, _ = run(capsys, 'verify-paper', '--only', 'no-such-check')
        assert code == cli.EXIT_USAGE

    def test_non_positive_tol(self, capsys):
        code, _, _ = run(capsys, 'verify-paper', '--tol', '0')
        assert code == cli.EXIT_USAGE




class TestConfig:
    def test_default_format(self):
        args = cli.build_parser().parse_args(['geodesic', '--nu', '2'])
        assert cli.make_config(args).output_format is OutputFormat.CSV
        args = cli.build_parser().parse_args(['symmetry', '--nu', '2'])
        assert cli.make_config(args).output_format is OutputFormat.JSON

    def test_only_split(self):
        args = cli.build_parser().parse_args(['verify-paper', '--only', 'a, b', '--only', 'c', '--seed', '1'])
        config = cli.make_config(args)
        assert config.only == ('a', 'b', 'c')
        assert config.seed == 1

    def test_params(self):
        args = cli.build_parser().parse_args(['classify', '--group', 'SU2', '--lambda', '3', '--mu', '2', '--nu', '1'])
        params = cli.make_config(args).params
        assert params['lam'] == 3.0
        assert params['group'] == 'SU2'
