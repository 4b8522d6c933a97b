from __future__ import division, print_function, absolute_import

import io
import json
import os
import shutil
import sys
import tempfile

import numpy
import pandas

from fredholm_bvp.cli import main, EXIT_OK, EXIT_SELFTEST_FAILED, EXIT_PARSE_ERROR, EXIT_NUMERICAL_FAILURE, \
    EXIT_HYPOTHESIS_FAILED

DATA_FOLDER = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')


def data_file(name):
    return os.path.join(DATA_FOLDER, name)


def run(*argv):
    """Runs command line, returns exit code, stdout and stderr"""
    stdout, stderr = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = io.StringIO(), io.StringIO()
    try:
        code = main(list(argv))
        return code, sys.stdout.getvalue(), sys.stderr.getvalue()
    finally:
        sys.stdout, sys.stderr = stdout, stderr


def check_exit(*argv):
    """Runs command line rejected by argument parser, returns exit code, stdout and stderr"""
    stdout, stderr = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = io.StringIO(), io.StringIO()
    try:
        main(list(argv))
    except SystemExit as e:
        return e.code, sys.stdout.getvalue(), sys.stderr.getvalue()
    finally:
        sys.stdout, sys.stderr = stdout, stderr
    assert False, 'exit expected'


def as_complex(pairs):
    pairs = numpy.array(pairs, dtype=float)
    return pairs[..., 0] + 1j * pairs[..., 1]


def test_analyze_derivative_conditions():
    code, out, _ = run('analyze', data_file('derivative_conditions.json'), '--json')
    assert code == EXIT_OK
    report = json.loads(out)
    assert numpy.max(numpy.abs(as_complex(report['M']) - [[1., -1.], [0., 1.]])) < 1e-7
    assert report['invertible'] and report['index'] == 0 and report['problem_type'] == 'square'
    assert len(report['problem_hash']) == 64


def test_analyze_overdetermined():
    first = run('--json', 'analyze', data_file('overdetermined.json'))
    second = run('--json', 'analyze', data_file('overdetermined.json'))
    assert first == second, 'report should be deterministic'
    report = json.loads(first[1])
    assert report['index'] == -1 and report['problem_type'] == 'overdetermined'
    assert report['solver']['n_steps'] == 1024

    code, out, _ = run('analyze', data_file('overdetermined.json'))
    assert code == EXIT_OK and 'M =' in out and 'index: -1' in out


def test_n_steps_flag_position():
    for argv in [('--n-steps', '64', 'analyze', data_file('cauchy.json'), '--json'),
                 ('analyze', data_file('cauchy.json'), '--n-steps', '64', '--json')]:
        code, out, _ = run(*argv)
        assert code == EXIT_OK
        assert json.loads(out)['solver']['n_steps'] == 64


def test_solve():
    directory = tempfile.mkdtemp()
    try:
        path = os.path.join(directory, 'solution.csv')
        code, out, _ = run('solve', data_file('cauchy.json'), '--out', path, '--json')
        assert code == EXIT_OK
        report = json.loads(out)
        assert report['classification'] == 'Unique' and report['kernel_dimension'] == 0
        assert report['residuals']['boundary_residual'] < 1e-9
        table = pandas.read_csv(path)
        assert list(table.columns) == ['t', 're_y1', 'im_y1', 're_y2', 'im_y2']
        assert len(table) == 2049
        # y(0) = c
        assert numpy.allclose(table.iloc[0][['re_y1', 'im_y1', 're_y2', 'im_y2']], [1., -1., 0.5, 0.])

        code, out, _ = run('solve', data_file('unsolvable.json'), '--json', '--out', path)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report['classification'] == 'Unsolvable'
        assert abs(report['residual_norm'] - 2 ** -0.5) < 1e-6
        assert list(pandas.read_csv(path).columns) == ['t']

        code, out, _ = run('solve', data_file('periodic.json'), '--json', '--out', path)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report['classification'] == 'SolvableNonUnique' and report['kernel_dimension'] == 2
        assert report['rank'] == 0 and report['warnings'] == []
        table = pandas.read_csv(path)
        assert list(table.columns) == ['t', 're_y1', 'im_y1', 're_y2', 'im_y2'] + \
            ['{}_kernel{}_y{}'.format(part, k, i) for k in [1, 2] for i in [1, 2] for part in ['re', 'im']]
        kernel_start = table[['re_kernel1_y1', 'im_kernel1_y1', 're_kernel1_y2', 'im_kernel1_y2']].values
        # kernel elements are periodic
        assert numpy.allclose(kernel_start[0], kernel_start[-1], atol=1e-9)
        assert numpy.abs(table[['re_y1', 'im_y1', 're_y2', 'im_y2']].values).max() < 1e-14
    finally:
        shutil.rmtree(directory)


def test_converge():
    code, out, _ = run('converge', data_file('converge_coefficient.json'), '--json')
    assert code == EXIT_OK
    report = json.loads(out)
    assert report['mode'] == 'coefficient'
    assert report['semicontinuity']['holds'] and report['hypothesis']['holds']

    code, _, err = run('converge', data_file('converge_oscillation.json'))
    assert code == EXIT_HYPOTHESIS_FAILED
    assert 'does not tend to zero' in err

    code, _, err = run('converge', data_file('cauchy.json'))
    assert code == EXIT_PARSE_ERROR and 'limits' in err


def test_converge_trace_file():
    directory = tempfile.mkdtemp()
    try:
        path = os.path.join(directory, 'trace.csv')
        code, _, _ = run('converge', data_file('converge_coefficient.json'), '--out', path, '--n-steps', '64')
        assert code == EXIT_OK
        trace = pandas.read_csv(path)
        assert list(trace['k']) == [1, 2, 4, 8, 16, 32, 64]
        assert numpy.all(numpy.diff(trace['norm_M_diff']) < 0)
    finally:
        shutil.rmtree(directory)


def test_selftest():
    code, out, _ = run('selftest')
    assert code == EXIT_OK
    assert 'passed' in out

    first = run('selftest', '--json')
    second = run('selftest', '--json')
    assert first[0] == EXIT_OK
    assert first == second, 'repeated selftest runs should give identical output'

    code, out, err = run('selftest', '--tolerance', '0', '--json')
    assert code == EXIT_SELFTEST_FAILED
    assert 'checks failed' in err
    assert not all(row['passed'] for row in json.loads(out))


def test_errors():
    directory = tempfile.mkdtemp()
    try:
        malformed = os.path.join(directory, 'malformed.json')
        with open(malformed, 'w') as f:
            f.write('{"interval": {"a": 0.0, "b": 1.0},\n "system": ')
        code, _, err = run('analyze', malformed)
        assert code == EXIT_PARSE_ERROR and 'line 2' in err

        code, _, _ = run('analyze', os.path.join(directory, 'missing.json'))
        assert code == EXIT_PARSE_ERROR

        with open(data_file('unsolvable.json')) as f:
            document = json.load(f)
        document['system']['A']['value'] = [[1e200]]
        document['grid']['n_steps'] = 4
        huge = os.path.join(directory, 'huge.json')
        with open(huge, 'w') as f:
            json.dump(document, f)
        with numpy.errstate(all='ignore'):
            code, _, err = run('solve', huge)
        assert code == EXIT_NUMERICAL_FAILURE and 'numerical failure' in err

        bad_limits = [({'eps_schedule': 'harmonic'}, 'limits.eps_schedule'),
                      ({'k_list': [4, 2]}, 'limits.k_list'),
                      ({'k_list': [0, 1]}, 'limits.k_list'),
                      ({'k_list': [1, 2, 4], 'eps_schedule': [0.1, 0.2, 0.3]}, 'limits.eps_schedule')]
        for change, field in bad_limits:
            with open(data_file('converge_coefficient.json')) as f:
                document = json.load(f)
            document['limits'].update(change)
            path = os.path.join(directory, 'bad_limits.json')
            with open(path, 'w') as f:
                json.dump(document, f, indent=2)
            code, _, err = run('converge', path)
            assert code == EXIT_PARSE_ERROR, change
            assert field in err, (change, err)

        for n_steps in ['3', '0']:
            code, _, err = check_exit('analyze', data_file('cauchy.json'), '--n-steps', n_steps)
            assert code == EXIT_PARSE_ERROR and 'at least 4' in err
    finally:
        shutil.rmtree(directory)
