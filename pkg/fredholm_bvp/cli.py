"""
**fredholm_bvp.cli** is the command line front end.

Commands:

* `analyze <file>` - characteristic matrix and Fredholm numbers of the problem
* `solve <file> [--out <csv>]` - classification and solution, samples are dumped to CSV
* `converge <file> [--out <csv>]` - runs the perturbation family from `limits` section of the file
* `selftest [--tolerance <real>]` - built-in oracle suite

Global flags: `--n-steps`, `--rank-tol`, `--json`.

Exit codes: 0 success (whatever the solvability of the problem is), 1 self-test failure,
2 malformed problem file, 3 numerical failure, 4 failed convergence hypothesis.

Examples
________

.. code-block:: bash

    fredholm-bvp analyze problem.json --json
    fredholm-bvp --n-steps 4096 solve problem.json --out solution.csv
    python -m fredholm_bvp selftest
"""

from __future__ import print_function, division, absolute_import

import argparse
import json
import sys
import warnings
from collections import OrderedDict

import numpy
import pandas

from .commonutils import ProblemFileError
from .functions import Grid
from .solver import BvpSolver
from .limits import PerturbationFamily, run_family, check_semicontinuity, check_hypothesis
from .problemfile import load_problem, problem_hash
from .oracles import selftest

__all__ = ['main', 'cmd_analyze', 'cmd_solve', 'cmd_converge', 'cmd_selftest']

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_HYPOTHESIS_FAILED = 4

MIN_N_STEPS = 4


def _complex_json(array):
    """Complex array as nested lists of [re, im] pairs"""
    array = numpy.asarray(array, dtype=complex)
    if array.ndim == 0:
        return [float(array.real), float(array.imag)]
    return [_complex_json(item) for item in array]


def _make_solver(definition, args):
    n_steps = definition.n_steps if args.n_steps is None else args.n_steps
    return BvpSolver(n_steps=n_steps, rank_tol=args.rank_tol)


def _analysis_report(definition, solver):
    characteristic, report = solver.analyze(definition.problem)
    result = OrderedDict()
    result['problem_hash'] = problem_hash(definition)
    result['solver'] = solver.get_params()
    result['M'] = _complex_json(characteristic.M)
    result['singular_values'] = [float(value) for value in characteristic.singular_values]
    result['rank_tolerance'] = characteristic.rank_tolerance
    for key, value in report.to_dict().items():
        result[key] = value
    return result


def _emit(report, as_json, stream=None):
    stream = sys.stdout if stream is None else stream
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2), file=stream)
        return
    for key, value in report.items():
        if key == 'M':
            print('M =', file=stream)
            for row in numpy.asarray(value).view(complex)[..., 0]:
                print('    ' + '  '.join('{:+.10f}{:+.10f}j'.format(x.real, x.imag) for x in row), file=stream)
        elif isinstance(value, (list, dict)) and len(value) == 0:
            print('{}: -'.format(key), file=stream)
        else:
            print('{}: {}'.format(key, value), file=stream)


def _record_warnings(report, caught):
    for item in caught:
        message = str(item.message)
        if message not in report['warnings']:
            report['warnings'].append(message)


def cmd_analyze(args):
    definition = load_problem(args.path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        report = _analysis_report(definition, _make_solver(definition, args))
    _record_warnings(report, caught)
    _emit(report, args.json)
    return EXIT_OK


def _solution_table(grid, solution, m):
    columns = OrderedDict()
    columns['t'] = grid.nodes
    if solution.particular is not None:
        values = solution.particular.level(0)
        for i in range(m):
            columns['re_y{}'.format(i + 1)] = values[:, i].real
            columns['im_y{}'.format(i + 1)] = values[:, i].imag
    for k, element in enumerate(solution.kernel_basis):
        values = element.level(0)
        for i in range(m):
            columns['re_kernel{}_y{}'.format(k + 1, i + 1)] = values[:, i].real
            columns['im_kernel{}_y{}'.format(k + 1, i + 1)] = values[:, i].imag
    return pandas.DataFrame(columns)


def cmd_solve(args):
    definition = load_problem(args.path)
    problem = definition.problem
    solver = _make_solver(definition, args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        report = _analysis_report(definition, solver)
        solution = solver.solve(problem)
        diagnostics = solver.verify(problem, solution)
    _record_warnings(report, caught)
    report['classification'] = solution.classification
    report['labels'] = solution.labels
    report['residual_norm'] = solution.residual_norm
    report['q'] = _complex_json(solution.q)
    report['kernel_dimension'] = len(solution.kernel_basis)
    report['residuals'] = diagnostics
    if args.out is not None:
        table = _solution_table(solver.make_grid(problem.interval), solution, problem.m)
        table.to_csv(args.out, index=False, float_format='%.12e')
    _emit(report, args.json)
    return EXIT_OK


def cmd_converge(args):
    definition = load_problem(args.path)
    if definition.limits is None:
        raise ProblemFileError('converge needs a limits section', field='limits')
    problem = definition.problem
    limits = definition.limits
    try:
        family = PerturbationFamily(problem, mode=limits['mode'], perturbation=limits['perturbation'],
                                    eps_schedule=limits['eps_schedule'], k_list=limits['k_list'])
    except (AssertionError, ValueError) as e:
        raise ProblemFileError(str(e), field='limits')
    n_steps = definition.n_steps if args.n_steps is None else args.n_steps
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        trace = run_family(family, Grid(problem.interval, n_steps), rank_tol=args.rank_tol)
    verdict = check_semicontinuity(trace, trace.base_report)
    hypothesis = check_hypothesis(trace)

    report = OrderedDict()
    report['problem_hash'] = problem_hash(definition)
    report['mode'] = limits['mode']
    report['base'] = trace.base_report.to_dict()
    report['semicontinuity'] = verdict
    report['hypothesis'] = hypothesis
    report['warnings'] = []
    _record_warnings(report, caught)
    if args.out is not None:
        trace.to_csv(args.out)
    elif not args.json:
        print(trace.records.to_string(index=False))
    _emit(report, args.json)
    if not hypothesis['holds']:
        print(hypothesis['message'], file=sys.stderr)
        return EXIT_HYPOTHESIS_FAILED
    return EXIT_OK


def cmd_selftest(args):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        table = selftest(tolerance=args.tolerance)
    if args.json:
        print(json.dumps(table.to_dict(orient='records'), sort_keys=True, indent=2))
    else:
        print(table.to_string(index=False))
    if not table['passed'].all():
        print('{} of {} checks failed'.format((~table['passed']).sum(), len(table)), file=sys.stderr)
        return EXIT_SELFTEST_FAILED
    return EXIT_OK


def _grid_size(value):
    n_steps = int(value)
    if n_steps < MIN_N_STEPS:
        raise argparse.ArgumentTypeError('number of grid steps should be at least {}, got {}'.format(MIN_N_STEPS, value))
    return n_steps


def _add_global_flags(parser, suppress):
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument('--n-steps', type=_grid_size, default=default(None), help='number of grid steps')
    parser.add_argument('--rank-tol', type=float, default=default(None), help='absolute tolerance of numerical rank')
    parser.add_argument('--json', action='store_true', default=default(False), help='machine-readable report')


def make_parser():
    parser = argparse.ArgumentParser(prog='fredholm-bvp',
                                     description='Fredholm analysis and solution of linear boundary-value problems')
    _add_global_flags(parser, suppress=False)
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    analyze = subparsers.add_parser('analyze', help='characteristic matrix and Fredholm numbers')
    analyze.add_argument('path')
    analyze.set_defaults(handler=cmd_analyze)

    solve = subparsers.add_parser('solve', help='solve the problem')
    solve.add_argument('path')
    solve.add_argument('--out', default=None, help='CSV file for solution samples')
    solve.set_defaults(handler=cmd_solve)

    converge = subparsers.add_parser('converge', help='run perturbation family from limits section')
    converge.add_argument('path')
    converge.add_argument('--out', default=None, help='CSV file for convergence trace')
    converge.set_defaults(handler=cmd_converge)

    test = subparsers.add_parser('selftest', help='run built-in oracle checks')
    test.add_argument('--tolerance', type=float, default=None, help='override tolerance of all checks')
    test.set_defaults(handler=cmd_selftest)

    for subparser in [analyze, solve, converge, test]:
        _add_global_flags(subparser, suppress=True)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ProblemFileError as e:
        print('error in problem file {}: {}'.format(getattr(args, 'path', ''), e), file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (IOError, OSError) as e:
        print('can not read {}: {}'.format(getattr(args, 'path', ''), e), file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (ValueError, AssertionError) as e:
        print('invalid problem {}: {}'.format(getattr(args, 'path', ''), e), file=sys.stderr)
        return EXIT_PARSE_ERROR
    except ArithmeticError as e:
        print('numerical failure: {}'.format(e), file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
