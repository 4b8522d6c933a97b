"""
**fredholm_bvp.oracles** contains independent reference answers and the built-in self-test.

* :func:`multipoint_derivative_matrix` - closed form for constant A and conditions
  sum_k alpha_k y^(k)(a) = c: M = sum_k alpha_k (-A)^k
* :func:`multipoint_fractional_matrix` - closed form for A = 0 and multipoint conditions with Caputo terms:
  M = sum_j beta_{j,0} (fractional derivatives of constants vanish)
* :func:`random_boundary_operator` - random operator mixing all kinds of terms
* :func:`selftest` - runs the oracle suite and returns table with errors

Examples
________

>>> table = selftest()
>>> print(table.to_string(index=False))
>>> table['passed'].all()
"""

from __future__ import print_function, division, absolute_import

from collections import OrderedDict

import numpy
import pandas
from scipy.linalg import expm
from sklearn.utils import check_random_state

from .commonutils import random_complex
from .functions import Interval, Grid, ConstantCoefficient, PolynomialCoefficient, materialize
from .fundamental import solve_fundamental
from .boundary import BoundaryOperator, PointDerivative, IntegralTerm, FractionalPointDerivative, \
    apply, apply_to_matrix
from .characteristic import characteristic_matrix, fredholm_report, numeric_rank
from .solver import BvpProblem, solve

__all__ = ['multipoint_derivative_matrix', 'multipoint_fractional_matrix', 'random_boundary_operator',
           'random_matrix_function', 'column_rule_error', 'selftest']

ROTATION = numpy.array([[0., 1.], [-1., 0.]])


def multipoint_derivative_matrix(A, alphas):
    """sum_k alphas[k] (-A)^k for constant matrix A"""
    A = numpy.asarray(A, dtype=complex)
    return sum(alpha.dot(numpy.linalg.matrix_power(-A, k)) for k, alpha in enumerate(alphas))


def multipoint_fractional_matrix(betas):
    """sum_j beta_{j,0}"""
    return sum(numpy.asarray(beta, dtype=complex) for beta in betas)


def random_boundary_operator(random_state, r, m, s, interval, kinds=('point', 'integral', 'fractional')):
    """
    Operator with one or two terms of each requested kind with random coefficients.
    Points are multiples of (b - a) / 8 in the left half of interval, so they are nodes of grids
    with n_steps divisible by 8.
    """
    assert s >= 1, 's should be positive'
    random_state = check_random_state(random_state)
    terms = []
    for kind in kinds:
        for _ in range(random_state.randint(1, 3)):
            point = interval.a + interval.length * random_state.randint(0, 5) / 8.
            coeff = random_complex(random_state, (r, m))
            if kind == 'point':
                terms.append(PointDerivative(random_state.randint(0, s + 1), point, coeff))
            elif kind == 'integral':
                kernel = PolynomialCoefficient(random_complex(random_state, (2, r, m)))
                terms.append(IntegralTerm(kernel))
            else:
                alpha = random_state.choice([0.3, 0.5, 0.75, 1.25, 1.5])
                kind_name = random_state.choice(['caputo', 'riemann_liouville'])
                terms.append(FractionalPointDerivative(alpha, point, coeff, kind=str(kind_name)))
    return BoundaryOperator(terms, r=r, m=m, s=s)


def random_matrix_function(random_state, grid, m, d_max):
    """Smooth random m x m matrix function (polynomial of degree 3) with derivative stack"""
    random_state = check_random_state(random_state)
    return materialize(PolynomialCoefficient(random_complex(random_state, (4, m, m))), grid, d_max=d_max)


def column_rule_error(B, H, d):
    """Relative difference between [BH] d and B(H d)"""
    left = apply_to_matrix(B, H).dot(d)
    right = apply(B, H.dot(d))
    return numpy.linalg.norm(left - right) / max(numpy.linalg.norm(right), 1e-300)


# region Self-test checks

def _fundamental_error(n_steps):
    A = numpy.array([[0., 2.], [-2., 0.5]])
    interval = Interval(0., 2.)
    fundamental = solve_fundamental(materialize(ConstantCoefficient(A), Grid(interval, n_steps), d_max=0), s=1)
    return numpy.max(numpy.abs(fundamental.Y.level(0)[-1] - expm(-A * interval.length)))


def _check_exponential():
    return _fundamental_error(2048), 1e-8


def _check_rk4_order():
    ratio = _fundamental_error(64) / _fundamental_error(128)
    return abs(numpy.log2(ratio) - 4.), 0.25


def _check_derivative_conditions(random_state):
    A = ROTATION
    m, s = 2, 3
    interval = Interval(0., 1.)
    error = 0.
    for r in [1, 2, 3]:
        alphas = [random_complex(random_state, (r, m)) for _ in range(3)]
        B = BoundaryOperator([PointDerivative(k, interval.a, alpha) for k, alpha in enumerate(alphas)], r=r, m=m, s=s)
        cm = characteristic_matrix(ConstantCoefficient(A), B, Grid(interval, 2048), s=s)
        error = max(error, numpy.max(numpy.abs(cm.M - multipoint_derivative_matrix(A, alphas))))
    return error, 1e-7


def _check_fractional_conditions(random_state):
    m, r, s = 2, 2, 2
    interval = Interval(0., 1.)
    points = [interval.a, (interval.a + interval.b) / 2.]
    terms = []
    betas = []
    for point in points:
        beta = random_complex(random_state, (r, m))
        betas.append(beta)
        terms.append(PointDerivative(0, point, beta))
        for alpha in [0.5, 1.5]:
            terms.append(FractionalPointDerivative(alpha, point, random_complex(random_state, (r, m)), kind='caputo'))
    B = BoundaryOperator(terms, r=r, m=m, s=s)
    cm = characteristic_matrix(ConstantCoefficient(numpy.zeros((m, m))), B, Grid(interval, 2048), s=s)
    expected = multipoint_fractional_matrix(betas)
    report = fredholm_report(cm)
    rank, _ = numeric_rank(expected)
    error = numpy.max(numpy.abs(cm.M - expected))
    if (report.dim_ker, report.dim_coker) != (m - rank, r - rank):
        error = numpy.inf
    return error, 1e-4


def _check_column_rule(random_state, n_triples=50):
    interval = Interval(0., 1.)
    grid = Grid(interval, 64)
    error = 0.
    for _ in range(n_triples):
        m = random_state.randint(1, 4)
        r = random_state.randint(1, 5)
        B = random_boundary_operator(random_state, r=r, m=m, s=2, interval=interval)
        H = random_matrix_function(random_state, grid, m=m, d_max=2)
        error = max(error, column_rule_error(B, H, random_complex(random_state, m)))
    return error, 1e-10


def _check_index(random_state, n_problems=20):
    interval = Interval(0., 1.)
    failures = 0
    for _ in range(n_problems):
        m = random_state.randint(1, 4)
        r = random_state.randint(1, 5)
        B = random_boundary_operator(random_state, r=r, m=m, s=1, interval=interval)
        A = PolynomialCoefficient(random_complex(random_state, (2, m, m), scale=0.5))
        report = fredholm_report(characteristic_matrix(A, B, Grid(interval, 256), s=1))
        failures += report.index != m - r or report.dim_ker - report.dim_coker != m - r
    return float(failures), 0.5


def _check_unsolvable_residual():
    interval = Interval(0., 1.)
    B = BoundaryOperator([PointDerivative(0, interval.a, [[1.], [0.]]),
                          PointDerivative(0, interval.b, [[0.], [1.]])], r=2, m=1, s=1)
    problem = BvpProblem(interval, m=1, s=1, A=ConstantCoefficient([[0.]]), f=None, B=B, c=[0., 1.])
    solution = solve(problem, Grid(interval, 2048))
    error = abs(solution.residual_norm - numpy.sqrt(0.5))
    if solution.classification != 'Unsolvable':
        error = numpy.inf
    return error, 1e-6


# endregion


def selftest(tolerance=None, random_state=42):
    """
    Runs oracle checks.

    :param tolerance: None to use built-in tolerances, otherwise the same tolerance for all checks
    :param random_state: seed, result is deterministic for fixed seed
    :return: pandas.DataFrame with columns check, error, tolerance, passed
    """
    random_state = check_random_state(random_state)
    checks = OrderedDict([
        ('fundamental matrix vs matrix exponential', _check_exponential),
        ('RK4 order (log2 of error ratio vs 4)', _check_rk4_order),
        ('derivative conditions at a: M = sum alpha_k (-A)^k', lambda: _check_derivative_conditions(random_state)),
        ('Caputo multipoint conditions: M = sum beta_j0', lambda: _check_fractional_conditions(random_state)),
        ('column rule [BH]d = B(Hd)', lambda: _check_column_rule(random_state)),
        ('index = m - r (number of failures)', lambda: _check_index(random_state)),
        ('unsolvable two-endpoint residual 1/sqrt(2)', _check_unsolvable_residual),
    ])
    rows = []
    for name, check in checks.items():
        error, default_tolerance = check()
        used_tolerance = default_tolerance if tolerance is None else tolerance
        rows.append(OrderedDict([('check', name), ('error', float(error)), ('tolerance', float(used_tolerance)),
                                 ('passed', bool(error <= used_tolerance))]))
    return pandas.DataFrame(rows, columns=['check', 'error', 'tolerance', 'passed'])
