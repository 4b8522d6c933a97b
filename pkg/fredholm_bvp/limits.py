"""
**fredholm_bvp.limits** is a harness for sequences of problems (L_k, B_k) converging to (L, B).

For a family of perturbed problems the harness tracks

* distance |A_k - A|_(s-1) between coefficients (sup over derivative levels 0..s-1),
* distance |M_k - M| between characteristic matrices,
* Fredholm numbers of each member,

and checks that for large k

    dim ker (L_k, B_k) <= dim ker (L, B),    dim coker (L_k, B_k) <= dim coker (L, B).

Convergence of the operators themselves can't be checked on a computer,
instead the computable criterion is used: |A_k - A|_(s-1) -> 0 and boundary data converge entrywise
(see :func:`check_hypothesis`).

Families (`mode` of :class:`PerturbationFamily`):

* 'coefficient' - A_k = A + eps_k P
* 'oscillation' - A_k = A + eps_k sin(t / eps_k) P, its derivatives don't converge, so for s >= 2 hypothesis fails
* 'boundary' - coefficients of boundary terms beta + eps_k Q
* 'point' - points of boundary terms t_j + eps_k delta

Examples
________

>>> family = PerturbationFamily(problem, mode='coefficient', perturbation=ConstantCoefficient(P))
>>> trace = run_family(family, Grid(problem.interval, n_steps=2048))
>>> trace.records[['k', 'norm_M_diff', 'rank']]
>>> check_semicontinuity(trace, trace.base_report)
>>> check_hypothesis(trace)
"""

from __future__ import print_function, division, absolute_import

import numbers
from collections import OrderedDict

import numpy
import pandas

from .commonutils import GridMismatch, check_complex_matrix, map_on_threads
from .functions import AbstractCoefficient, ConstantCoefficient, CoefficientSum, TrigonometricCoefficient, \
    materialize, sup_level_norm
from .fundamental import solve_fundamental
from .boundary import IntegralTerm, PointDerivative, boundary_distance
from .characteristic import characteristic_from_fundamental, fredholm_report
from .solver import BvpProblem

__all__ = ['PerturbationFamily', 'ConvergenceTrace', 'run_family', 'check_semicontinuity',
           'coefficient_convergence_norm', 'check_hypothesis']

MODES = ('coefficient', 'oscillation', 'boundary', 'point')
SCHEDULES = ('inverse', 'inverse_square', 'zero')
DEFAULT_K_LIST = (1, 2, 4, 8, 16, 32, 64)
TRACE_COLUMNS = ['k', 'eps', 'norm_A_diff', 'norm_M_diff', 'rank', 'dim_ker', 'dim_coker']
# final value of a decaying norm should be below this share of the first nonzero value
HYPOTHESIS_RATIO = 0.1


def compute_eps(schedule, k_list):
    """
    :param schedule: 'inverse' (1/k), 'inverse_square' (1/k^2), 'zero' or explicit list of values
    :return: numpy.array of eps_k, one for each k
    """
    k_list = numpy.asarray(k_list, dtype=float)
    if isinstance(schedule, str):
        assert schedule in SCHEDULES, 'unknown schedule {}, use one of {} or a list'.format(schedule, SCHEDULES)
        if schedule == 'inverse':
            return 1. / k_list
        if schedule == 'inverse_square':
            return 1. / k_list ** 2
        return numpy.zeros(len(k_list))
    eps = numpy.array(schedule, dtype=float)
    assert eps.shape == k_list.shape, 'schedule should have one value for each k'
    assert numpy.all(eps >= 0), 'eps should be non-negative'
    assert numpy.all(numpy.diff(eps) <= 0), 'eps should not increase'
    return eps


class PerturbationFamily(object):
    def __init__(self, base, mode, perturbation, eps_schedule='inverse', k_list=DEFAULT_K_LIST):
        """
        Sequence of problems converging (or not, for 'oscillation' with s >= 2) to base problem.
        Right sides f and c are kept equal to those of base problem.

        :param BvpProblem base: limit problem
        :param str mode: 'coefficient', 'oscillation', 'boundary' or 'point'
        :param perturbation: depends on mode

            * 'coefficient' - AbstractCoefficient (or constant matrix) P, m x m
            * 'oscillation' - constant matrix P, m x m
            * 'boundary' - matrix Q (r x m) added to coefficients of all point terms,
              or list with one item per term: None, matrix (point terms) or AbstractCoefficient (integral terms)
            * 'point' - drift delta of all point-derivative terms, or list of drifts per term
              (fractional terms must stay on grid nodes and are never drifted)

        :param eps_schedule: 'inverse', 'inverse_square', 'zero' or list of values
        :param k_list: strictly increasing positive integers
        """
        assert isinstance(base, BvpProblem), 'base should be BvpProblem'
        assert mode in MODES, 'mode should be one of {}, got {}'.format(MODES, mode)
        k_list = [int(k) for k in k_list]
        assert len(k_list) > 0 and k_list[0] >= 1, 'k_list should contain positive integers'
        assert all(k1 < k2 for k1, k2 in zip(k_list[:-1], k_list[1:])), 'k_list should be strictly increasing'
        self.base = base
        self.mode = mode
        self.perturbation = perturbation
        self.eps_schedule = eps_schedule
        self.k_list = k_list
        self.eps = compute_eps(eps_schedule, k_list)
        self._check_perturbation()

    def _is_per_term(self):
        """
        List is taken per term in 'point' mode, and in 'boundary' mode when its items are
        None, coefficients or matrices. Nested list with vector rows is a single matrix Q.
        """
        perturbation = self.perturbation
        if not isinstance(perturbation, (list, tuple)):
            return False
        if self.mode == 'point':
            return True
        return all(item is None or isinstance(item, AbstractCoefficient) or numpy.ndim(item) == 2
                   for item in perturbation)

    def _per_term(self):
        if self._is_per_term():
            assert len(self.perturbation) == len(self.base.B.terms), 'perturbation should be given for each term'
            return list(self.perturbation)
        return [None if isinstance(term, IntegralTerm) else self.perturbation for term in self.base.B.terms]

    def _check_perturbation(self):
        m, r = self.base.m, self.base.r
        if self.mode == 'coefficient':
            if not isinstance(self.perturbation, AbstractCoefficient):
                check_complex_matrix(self.perturbation, shape=(m, m), name='perturbation')
        elif self.mode == 'oscillation':
            check_complex_matrix(self.perturbation, shape=(m, m), name='perturbation')
        elif self.mode == 'boundary':
            for term, item in zip(self.base.B.terms, self._per_term()):
                if item is None:
                    continue
                if isinstance(term, IntegralTerm):
                    assert isinstance(item, AbstractCoefficient), 'integral terms are perturbed by coefficients'
                else:
                    check_complex_matrix(item, shape=(r, m), name='perturbation')
        else:
            for item in self._per_term():
                assert item is None or isinstance(item, numbers.Real), 'drift should be a real number'

    def perturbed_coefficient(self, eps):
        A = self.base.A
        if eps == 0 or self.mode not in ('coefficient', 'oscillation'):
            return A
        if self.mode == 'coefficient':
            P = self.perturbation
            if not isinstance(P, AbstractCoefficient):
                P = ConstantCoefficient(P)
            return CoefficientSum([A, P], weights=[1., eps])
        P = TrigonometricCoefficient(self.perturbation, amplitude=eps, frequency=1. / eps)
        return CoefficientSum([A, P])

    def perturbed_boundary(self, eps):
        B = self.base.B
        if eps == 0 or self.mode not in ('boundary', 'point'):
            return B
        terms = []
        for term, item in zip(B.terms, self._per_term()):
            if item is None:
                terms.append(term)
            elif self.mode == 'point':
                if isinstance(term, PointDerivative):
                    term = term.replace(point=term.point + eps * item)
                terms.append(term)
            elif isinstance(term, IntegralTerm):
                terms.append(term.replace(kernel=CoefficientSum([term.kernel, item], weights=[1., eps])))
            else:
                terms.append(term.replace(coeff=term.coeff + eps * numpy.asarray(item, dtype=complex)))
        return B.replace_terms(terms)

    def member(self, index):
        """Problem (L_k, B_k) for k = k_list[index]"""
        eps = self.eps[index]
        return self.base.replace(A=self.perturbed_coefficient(eps), B=self.perturbed_boundary(eps))


class ConvergenceTrace(object):
    def __init__(self, records, base_characteristic, base_report):
        """
        :param pandas.DataFrame records: one row per k, ordered by k
        :param CharacteristicMatrix base_characteristic: M of the limit problem
        :param FredholmReport base_report: Fredholm numbers of the limit problem
        """
        self.records = records.sort_values('k').reset_index(drop=True)
        self.base_characteristic = base_characteristic
        self.base_report = base_report

    def to_csv(self, path):
        self.records[TRACE_COLUMNS].to_csv(path, index=False, float_format='%.12e')


def coefficient_convergence_norm(A_k, A, s):
    """
    Grid realization of |A_k - A|_(s-1): max over derivative levels 0..s-1 of max node norm.

    :param GridMatrixFunction A_k: perturbed coefficient
    :param GridMatrixFunction A: limit coefficient on the same grid
    :param int s: smoothness order
    """
    if A_k.grid != A.grid:
        raise GridMismatch('coefficients are sampled on different grids')
    return float(sup_level_norm(A_k - A, s - 1))


def _analyze(problem, grid, rank_tol, max_order):
    A = materialize(problem.A, grid, d_max=problem.s - 1)
    fundamental = solve_fundamental(A, problem.s, max_order=max_order)
    characteristic = characteristic_from_fundamental(problem.B, fundamental.Y, rank_tol=rank_tol)
    return A, characteristic, fredholm_report(characteristic)


def run_family(family, grid, n_threads=None, rank_tol=None, max_order=5, verbose=False):
    """
    Computes characteristic matrices and Fredholm numbers of base problem and each member of the family.

    :param PerturbationFamily family: family
    :param Grid grid: grid used for all members
    :param n_threads: None or number of threads, result doesn't depend on it
    :return: ConvergenceTrace
    """
    base = family.base
    base_A, base_characteristic, base_report = _analyze(base, grid, rank_tol, max_order)

    def evaluate(index):
        member = family.member(index)
        A_k, characteristic, report = _analyze(member, grid, rank_tol, max_order)
        record = OrderedDict()
        record['k'] = family.k_list[index]
        record['eps'] = float(family.eps[index])
        record['norm_A_diff'] = coefficient_convergence_norm(A_k, base_A, base.s)
        record['norm_M_diff'] = float(numpy.linalg.norm(characteristic.M - base_characteristic.M))
        record['rank'] = report.rank
        record['dim_ker'] = report.dim_ker
        record['dim_coker'] = report.dim_coker
        record['norm_B_diff'] = float(boundary_distance(member.B, base.B, grid=grid))
        record['spectral_gap'] = report.spectral_gap
        if verbose:
            print('k = {}: |M_k - M| = {:.3e}, rank {}'.format(record['k'], record['norm_M_diff'], record['rank']))
        return record

    records = map_on_threads(n_threads, evaluate, range(len(family.k_list)))
    return ConvergenceTrace(pandas.DataFrame(records), base_characteristic, base_report)


def check_semicontinuity(trace, base_report):
    """
    Finds the smallest recorded k* such that for all k >= k*
    dim ker_k <= dim ker and dim coker_k <= dim coker.

    :return: OrderedDict with keys holds, k_star (None if inequalities fail for the last k),
        rank_monotone, invertibility_preserved, surjectivity_preserved, injectivity_preserved
        (last three are None if base problem doesn't have the property)
    """
    records = trace.records
    assert len(records) > 0, 'trace is empty'
    satisfied = (records['dim_ker'] <= base_report.dim_ker).values & \
                (records['dim_coker'] <= base_report.dim_coker).values
    result = OrderedDict()
    if not satisfied[-1]:
        result['holds'] = False
        result['k_star'] = None
        tail = records.iloc[:0]
    else:
        violated = numpy.where(~satisfied)[0]
        first = 0 if len(violated) == 0 else violated[-1] + 1
        result['holds'] = True
        result['k_star'] = int(records['k'].values[first])
        tail = records.iloc[first:]

    result['rank_monotone'] = bool(numpy.all(tail['rank'] >= base_report.rank)) if result['holds'] else False
    invertible = (tail['dim_ker'] == 0) & (tail['dim_coker'] == 0) & (base_report.r == base_report.m)
    result['invertibility_preserved'] = bool(numpy.all(invertible)) if base_report.invertible else None
    result['surjectivity_preserved'] = bool(numpy.all(tail['dim_coker'] == 0)) if base_report.dim_coker == 0 else None
    result['injectivity_preserved'] = bool(numpy.all(tail['dim_ker'] == 0)) if base_report.dim_ker == 0 else None
    if not result['holds']:
        for key in ['invertibility_preserved', 'surjectivity_preserved', 'injectivity_preserved']:
            if result[key] is not None:
                result[key] = False
    return result


def _decays(values, ratio):
    values = numpy.asarray(values, dtype=float)
    nonzero = numpy.where(values > 0)[0]
    if len(nonzero) == 0:
        return True, 0.
    decay = values[-1] / values[nonzero[0]]
    return decay <= ratio, float(decay)


def check_hypothesis(trace, ratio=HYPOTHESIS_RATIO):
    """
    Checks the computable criterion of convergence of operators: norm_A_diff and norm_B_diff decay,
    i.e. final value is at most ratio * first nonzero value (or all values are zero).

    :return: OrderedDict with keys holds, coefficient_decay, boundary_decay, message
    """
    coefficient_ok, coefficient_decay = _decays(trace.records['norm_A_diff'], ratio)
    boundary_ok, boundary_decay = _decays(trace.records['norm_B_diff'], ratio)
    result = OrderedDict()
    result['holds'] = coefficient_ok and boundary_ok
    result['coefficient_decay'] = coefficient_decay
    result['boundary_decay'] = boundary_decay
    if result['holds']:
        result['message'] = 'coefficients and boundary data converge'
    elif not coefficient_ok:
        result['message'] = '|A_k - A|_(s-1) does not tend to zero (final/first = {:.3g}): ' \
                            'convergence hypothesis fails, nothing is claimed about M_k'.format(coefficient_decay)
    else:
        result['message'] = 'boundary data do not converge (final/first = {:.3g}): ' \
                            'convergence hypothesis fails, nothing is claimed about M_k'.format(boundary_decay)
    return result
