"""
**fredholm_bvp.solver** classifies and solves the full inhomogeneous problem

    y'(t) + A(t) y(t) = f(t),  t in [a, b],
    B y = c.

Every solution is y = Y q + y_p, where Y is the fundamental matrix and y_p is the particular solution
with y_p(a) = 0. Since B(Y q) = [BY] q = M q, the problem reduces to linear system

    M q = c - B y_p

which is solved in least-squares sense with SVD of M. Among all solutions the minimum-norm q is returned,
the kernel of the problem is spanned by Y q_i for q_i from the kernel of M.

Classification of result:

* `Unique` - system is consistent and rank M = m
* `SolvableNonUnique` - system is consistent, rank M < m (flag `underdetermined` is set when r < m and rank = r)
* `Unsolvable` - c - B y_p has component outside of column space of M

Examples
________

>>> problem = BvpProblem(Interval(0, 1), m=2, s=1, A=ConstantCoefficient(A), f=ConstantCoefficient([1, 0]),
>>>                      B=B, c=[0, 1])
>>> solver = BvpSolver(n_steps=2048)
>>> solution = solver.solve(problem)
>>> solution.classification, solution.residual_norm
>>> solver.verify(problem, solution)
"""

from __future__ import print_function, division, absolute_import

from collections import OrderedDict

import numpy
from scipy.linalg import svd
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state

from .commonutils import DEFAULT_N_STEPS, DEFAULT_MAX_ORDER, UnsupportedDerivativeOrder, \
    check_complex_vector, map_on_threads, random_complex
from .functions import Interval, Grid, AbstractCoefficient, ConstantCoefficient, CoefficientSum, materialize, \
    grid_norm
from .fundamental import solve_fundamental, solve_particular, ode_residual
from .boundary import BoundaryOperator, apply
from .characteristic import characteristic_matrix, characteristic_from_fundamental, fredholm_report

__all__ = ['BvpProblem', 'BvpSolution', 'BvpSolver', 'solve', 'verify_solution', 'estimate_stability_constant']

UNIQUE = 'Unique'
SOLVABLE_NON_UNIQUE = 'SolvableNonUnique'
UNSOLVABLE = 'Unsolvable'
UNDERDETERMINED = 'Underdetermined'

RELATIVE_SOLVABILITY_TOLERANCE = 1e-6


class BvpProblem(object):
    _param_names = ('interval', 'm', 's', 'A', 'f', 'B', 'c')

    def __init__(self, interval, m, s, A, f, B, c):
        """
        Linear boundary-value problem y' + A y = f, B y = c.

        :param Interval interval: [a, b]
        :param int m: dimension of the system
        :param int s: smoothness order, highest derivative used by boundary conditions is at most s
        :param AbstractCoefficient A: m x m matrix coefficient
        :param f: AbstractCoefficient with vector values of length m, None means f = 0
        :param BoundaryOperator B: boundary operator with r conditions
        :param c: complex vector of length r
        """
        assert isinstance(interval, Interval), 'interval should be Interval'
        assert int(m) == m and m >= 1, 'm should be positive integer'
        assert int(s) == s and s >= 1, 's should be positive integer'
        assert isinstance(A, AbstractCoefficient), 'A should be coefficient encoding'
        assert tuple(A.shape) == (m, m), 'A should be {}x{}, got {}'.format(m, m, A.shape)
        if f is None:
            f = ConstantCoefficient(numpy.zeros(m))
        assert isinstance(f, AbstractCoefficient), 'f should be coefficient encoding'
        assert tuple(f.shape) == (m,), 'f should be vector of length {}, got shape {}'.format(m, f.shape)
        assert isinstance(B, BoundaryOperator), 'B should be BoundaryOperator'
        assert B.m == m, 'boundary operator acts on dimension {}, system has {}'.format(B.m, m)
        if B.s > s or B.max_order > s:
            raise UnsupportedDerivativeOrder('boundary operator needs smoothness {}, problem has s = {}'.format(
                max(B.s, B.max_order), s))
        B.check_interval(interval)
        self.interval = interval
        self.m = int(m)
        self.s = int(s)
        self.A = A
        self.f = f
        self.B = B
        self.c = check_complex_vector(c, length=B.r, name='c')

    @property
    def r(self):
        return self.B.r

    def replace(self, **changes):
        """Copy of problem with some fields changed"""
        params = {name: getattr(self, name) for name in self._param_names}
        params.update(changes)
        return BvpProblem(**params)


class BvpSolution(object):
    def __init__(self, classification, particular, kernel_basis, residual_norm, q,
                 characteristic, least_squares=None, underdetermined=False):
        """
        Result of :func:`solve`.

        :param str classification: 'Unique', 'SolvableNonUnique' or 'Unsolvable'
        :param particular: GridVectorFunction y = Y q + y_p or None if problem is unsolvable
        :param list kernel_basis: GridVectorFunction-s Y q_i spanning kernel of the problem
        :param float residual_norm: |M q + B y_p - c|
        :param q: minimum-norm least-squares initial value
        :param CharacteristicMatrix characteristic: M with its rank analysis
        :param least_squares: least-squares fit Y q + y_p (kept also for unsolvable problems)
        :param bool underdetermined: r < m and rank M = r
        """
        self.classification = classification
        self.particular = particular
        self.kernel_basis = list(kernel_basis)
        self.residual_norm = float(residual_norm)
        self.q = q
        self.characteristic = characteristic
        self.least_squares = least_squares
        self.underdetermined = underdetermined

    @property
    def labels(self):
        labels = [self.classification]
        if self.underdetermined:
            labels.append(UNDERDETERMINED)
        return labels


def _minimum_norm_solution(M, rhs, rank):
    """Truncated SVD pseudo-inverse applied to rhs"""
    u, singular_values, vh = svd(M)
    coordinates = u[:, :rank].T.conj().dot(rhs) / singular_values[:rank]
    return vh[:rank].T.conj().dot(coordinates)


def solve(problem, grid, rank_tol=None, solvability_tol=None, max_order=DEFAULT_MAX_ORDER):
    """
    Solves boundary-value problem on the grid.

    :param BvpProblem problem: problem
    :param Grid grid: grid over problem.interval
    :param rank_tol: None or absolute tolerance of numerical rank of M
    :param solvability_tol: None (default 1e-6 * (1 + |c|)) or absolute threshold for residual
    :param int max_order: highest supported smoothness order
    :return: BvpSolution
    """
    assert grid.interval == problem.interval, 'grid is built over another interval'
    s = problem.s
    A = materialize(problem.A, grid, d_max=s - 1)
    f = materialize(problem.f, grid, d_max=s - 1)
    fundamental = solve_fundamental(A, s, max_order=max_order)
    y_p = solve_particular(A, f, s, max_order=max_order).y_p
    characteristic = characteristic_from_fundamental(problem.B, fundamental.Y, rank_tol=rank_tol)

    rhs = problem.c - apply(problem.B, y_p)
    q = _minimum_norm_solution(characteristic.M, rhs, characteristic.rank)
    residual_norm = numpy.linalg.norm(characteristic.M.dot(q) - rhs)
    if solvability_tol is None:
        solvability_tol = RELATIVE_SOLVABILITY_TOLERANCE * (1 + numpy.linalg.norm(problem.c))

    kernel_basis = [fundamental.solution(vector) for vector in characteristic.kernel_vectors()]
    fit = fundamental.solution(q) + y_p
    underdetermined = False
    if residual_norm > solvability_tol:
        classification = UNSOLVABLE
        particular = None
    else:
        particular = fit
        if characteristic.rank == problem.m:
            classification = UNIQUE
        else:
            classification = SOLVABLE_NON_UNIQUE
            underdetermined = problem.r < problem.m and characteristic.rank == problem.r
    return BvpSolution(classification, particular=particular, kernel_basis=kernel_basis,
                       residual_norm=residual_norm, q=q, characteristic=characteristic,
                       least_squares=fit, underdetermined=underdetermined)


def verify_solution(problem, solution, grid):
    """
    Residuals of the equation and of boundary conditions for returned solution and for kernel elements.
    For unsolvable problems the least-squares fit is checked.

    :return: OrderedDict with keys
        ode_residual, boundary_residual, kernel_ode_residuals, kernel_boundary_residuals
    """
    A = materialize(problem.A, grid, d_max=0)
    f = materialize(problem.f, grid, d_max=0)
    y = solution.particular if solution.particular is not None else solution.least_squares
    result = OrderedDict()
    result['ode_residual'] = float(ode_residual(A, y, f))
    result['boundary_residual'] = float(numpy.linalg.norm(apply(problem.B, y) - problem.c))
    result['kernel_ode_residuals'] = [float(ode_residual(A, element)) for element in solution.kernel_basis]
    result['kernel_boundary_residuals'] = [float(numpy.linalg.norm(apply(problem.B, element)))
                                           for element in solution.kernel_basis]
    return result


def estimate_stability_constant(problem, grid, delta=1e-3, random_state=None, **solve_args):
    """
    Estimates K in |y(f + df, c + dc) - y(f, c)|_(s) <= K delta for problem with unique solution,
    (df, dc) is a random direction of unit norm scaled by delta, df is constant.

    :param float delta: size of perturbation
    :param random_state: seed or RandomState, determines the direction
    :return: float, |change of solution| / delta
    """
    random_state = check_random_state(random_state)
    direction_f = random_complex(random_state, problem.m)
    direction_c = random_complex(random_state, problem.r)
    norm = numpy.sqrt(numpy.linalg.norm(direction_f) ** 2 + numpy.linalg.norm(direction_c) ** 2)
    direction_f, direction_c = direction_f / norm, direction_c / norm

    perturbed = problem.replace(f=CoefficientSum([problem.f, ConstantCoefficient(direction_f)], weights=[1., delta]),
                                c=problem.c + delta * direction_c)
    base_solution = solve(problem, grid, **solve_args)
    perturbed_solution = solve(perturbed, grid, **solve_args)
    assert base_solution.classification == UNIQUE, 'stability constant is defined for uniquely solvable problems'
    change = perturbed_solution.particular - base_solution.particular
    return grid_norm(change, problem.s) / delta


class BvpSolver(BaseEstimator):
    def __init__(self, n_steps=DEFAULT_N_STEPS, rank_tol=None, solvability_tol=None, max_order=DEFAULT_MAX_ORDER,
                 n_threads=None, verbose=False):
        """
        Configured front end of the package: keeps numerical parameters and
        applies analysis and solution to problems.

        :param int n_steps: number of grid steps
        :param rank_tol: None (relative default) or absolute tolerance of numerical rank
        :param solvability_tol: None (1e-6 * (1 + |c|)) or absolute threshold of the residual
        :param int max_order: highest supported smoothness order s
        :param n_threads: None or number of threads used by :meth:`solve_many`
        :param bool verbose: print progress
        """
        self.n_steps = n_steps
        self.rank_tol = rank_tol
        self.solvability_tol = solvability_tol
        self.max_order = max_order
        self.n_threads = n_threads
        self.verbose = verbose

    def make_grid(self, interval):
        return Grid(interval, n_steps=self.n_steps)

    def analyze(self, problem):
        """
        :return: tuple (CharacteristicMatrix, FredholmReport)
        """
        characteristic = characteristic_matrix(problem.A, problem.B, self.make_grid(problem.interval), problem.s,
                                               rank_tol=self.rank_tol, max_order=self.max_order)
        report = fredholm_report(characteristic)
        if self.verbose:
            print('analyzed m={}, r={}: rank {}, index {}'.format(report.m, report.r, report.rank, report.index))
        return characteristic, report

    def solve(self, problem):
        solution = solve(problem, self.make_grid(problem.interval), rank_tol=self.rank_tol,
                         solvability_tol=self.solvability_tol, max_order=self.max_order)
        if self.verbose:
            print('solved m={}, r={}: {}, residual {:.3e}'.format(
                problem.m, problem.r, ' '.join(solution.labels), solution.residual_norm))
        return solution

    def verify(self, problem, solution):
        return verify_solution(problem, solution, self.make_grid(problem.interval))

    def solve_many(self, problems):
        """Solves independent problems, order of results follows order of problems"""
        return map_on_threads(self.n_threads, self.solve, problems)
