"""
**fredholm_bvp.fundamental** solves Cauchy problems for the linear system y' + A(t) y = f(t).

* :func:`solve_fundamental` - fundamental matrix: Y' + A(t) Y = 0, Y(a) = I
* :func:`solve_particular` - particular solution with zero initial data
* :func:`solve_cauchy` - solution with arbitrary initial data
* :func:`derivative_stack` - higher derivatives of solutions from the differential recurrence

Integration is done with classical Runge-Kutta method of 4th order with step equal to the grid step,
A(t) is interpolated at half-steps. Higher derivatives are never computed by numerical differentiation,
instead Leibniz rule applied to Y' = -A Y gives

    Y^(k+1) = - sum_{i=0}^{k} C(k, i) A^(i) Y^(k-i)

Examples
________

>>> A = materialize(ConstantCoefficient([[0, 1], [-1, 0]]), grid, d_max=2)
>>> fundamental = solve_fundamental(A, s=3)
>>> fundamental.Y.values[1, 0]  # Y'(a) = -A
"""

from __future__ import print_function, division, absolute_import

import numpy
from scipy.special import comb

from .commonutils import DEFAULT_MAX_ORDER, UnsupportedDerivativeOrder, GridMismatch, SingularFundamentalMatrix
from .functions import GridMatrixFunction, GridVectorFunction, interpolate_many, differentiate_samples

__all__ = ['FundamentalMatrix', 'ParticularSolution', 'solve_fundamental', 'solve_particular',
           'solve_cauchy', 'derivative_stack', 'ode_residual']

DETERMINANT_FLOOR = 1e-12


class FundamentalMatrix(object):
    def __init__(self, Y):
        """
        Fundamental matrix (matricant) of the system, Y(a) = I.

        :param GridMatrixFunction Y: samples of Y with derivative stack
        """
        self.Y = Y

    @property
    def interval(self):
        return self.Y.grid.interval

    @property
    def m(self):
        return self.Y.rows

    def solution(self, q):
        """Solution of homogeneous system with initial value q: y(t) = Y(t) q"""
        return self.Y.dot(q)


class ParticularSolution(object):
    def __init__(self, y_p):
        """
        Solution of y' + A y = f with y(a) = 0.

        :param GridVectorFunction y_p: samples with derivative stack
        """
        self.y_p = y_p


def _apply(matrices, vectors):
    """Node-wise product of matrices [n, m, m] with vectors [n, m] or matrices [n, m, p]"""
    return numpy.einsum('nij,nj...->ni...', matrices, vectors)


def _check_coefficient(A, s, max_order):
    assert isinstance(A, GridMatrixFunction), 'A should be GridMatrixFunction'
    assert A.rows == A.cols, 'A should be square, got {}x{}'.format(A.rows, A.cols)
    if not 1 <= s <= max_order:
        raise UnsupportedDerivativeOrder('smoothness order s should be in [1, {}], got {}'.format(max_order, s))
    if A.d_max < s - 1:
        raise UnsupportedDerivativeOrder('A carries derivatives up to {}, at least {} needed'.format(A.d_max, s - 1))


def _check_forcing(A, f, s):
    if f.grid != A.grid:
        raise GridMismatch('A and f are sampled on different grids')
    assert f.dim == A.rows, 'dimension of f is {}, expected {}'.format(f.dim, A.rows)
    if f.d_max < s - 1:
        raise UnsupportedDerivativeOrder('f carries derivatives up to {}, at least {} needed'.format(f.d_max, s - 1))


def _integrate_rk4(A, initial, forcing=None):
    """
    Classical RK4 for Z' = -A(t) Z + F(t), Z(a) = initial.

    :param GridMatrixFunction A: coefficient
    :param initial: numpy.array of shape [m] or [m, p]
    :param forcing: None or GridVectorFunction F (only with vector initial value)
    :return: numpy.array of shape [n_nodes] + initial.shape
    """
    grid = A.grid
    step = grid.step
    midpoints = grid.nodes[:-1] + 0.5 * step
    A_nodes = A.level(0)
    A_mid = interpolate_many(A, midpoints)
    if forcing is None:
        F_nodes = numpy.zeros((grid.n_steps + 1,) + initial.shape, dtype=complex)
        F_mid = F_nodes[:-1]
    else:
        F_nodes = forcing.level(0)
        F_mid = interpolate_many(forcing, midpoints)

    state = numpy.zeros((grid.n_steps + 1,) + initial.shape, dtype=complex)
    state[0] = initial
    for i in range(grid.n_steps):
        z = state[i]
        k1 = F_nodes[i] - A_nodes[i].dot(z)
        k2 = F_mid[i] - A_mid[i].dot(z + 0.5 * step * k1)
        k3 = F_mid[i] - A_mid[i].dot(z + 0.5 * step * k2)
        k4 = F_nodes[i + 1] - A_nodes[i + 1].dot(z + step * k3)
        state[i + 1] = z + step / 6. * (k1 + 2 * k2 + 2 * k3 + k4)
    return state


def _leibniz_levels(A, level0, s, forcing=None):
    """Derivatives 0..s of solution of z' = -A z + F from its samples, using only A- and F-derivatives"""
    levels = [level0]
    for k in range(s):
        next_level = numpy.zeros(level0.shape, dtype=complex)
        if forcing is not None:
            next_level += forcing.level(k)
        for i in range(k + 1):
            next_level -= comb(k, i, exact=True) * _apply(A.level(i), levels[k - i])
        levels.append(next_level)
    return numpy.array(levels)


def derivative_stack(A, Y, s):
    """
    Fills derivatives Y^(k), k = 1..s, of solution of Y' = -A Y using the recurrence
    Y^(k+1) = - sum_i C(k, i) A^(i) Y^(k-i).

    :param GridMatrixFunction A: coefficient with derivatives up to s - 1
    :param GridMatrixFunction Y: solution samples (only level 0 is used)
    :param int s: highest derivative
    :return: GridMatrixFunction with d_max = s
    """
    if A.d_max < s - 1:
        raise UnsupportedDerivativeOrder('A carries derivatives up to {}, at least {} needed'.format(A.d_max, s - 1))
    if A.grid != Y.grid:
        raise GridMismatch('A and Y are sampled on different grids')
    return GridMatrixFunction(Y.grid, _leibniz_levels(A, Y.level(0), s))


def _check_determinant(A, samples):
    grid = A.grid
    determinants = numpy.linalg.det(samples)
    # |trace A| <= nuclear norm of A
    max_norm = numpy.max(numpy.linalg.norm(A.level(0), ord='nuc', axis=(1, 2)))
    floor = DETERMINANT_FLOOR * numpy.exp(-grid.interval.length * max_norm)
    collapsed = ~numpy.isfinite(determinants) | (numpy.abs(determinants) <= floor)
    if numpy.any(collapsed):
        t = grid.nodes[numpy.argmax(collapsed)]
        raise SingularFundamentalMatrix('det Y(t) collapsed at t = {} (floor {:.3e}), '
                                        'integration blew up or grid is too coarse'.format(t, floor))


def solve_fundamental(A, s, max_order=DEFAULT_MAX_ORDER):
    """
    Solves matrix Cauchy problem Y' + A(t) Y = 0, Y(a) = I.

    :param GridMatrixFunction A: m x m coefficient with derivatives up to s - 1
    :param int s: smoothness order, derivative stack of Y is computed up to s
    :param int max_order: the highest supported s
    :return: FundamentalMatrix
    """
    _check_coefficient(A, s, max_order=max_order)
    m = A.rows
    samples = _integrate_rk4(A, numpy.eye(m, dtype=complex))
    samples[0] = numpy.eye(m)
    _check_determinant(A, samples)
    levels = _leibniz_levels(A, samples, s)
    return FundamentalMatrix(GridMatrixFunction(A.grid, levels))


def solve_cauchy(A, f, q, s, max_order=DEFAULT_MAX_ORDER):
    """
    Solves y' + A(t) y = f(t), y(a) = q directly.

    :param GridMatrixFunction A: coefficient
    :param f: None (homogeneous system) or GridVectorFunction with derivatives up to s - 1
    :param q: initial value, vector of length m
    :param int s: derivative stack of solution is computed up to s
    :return: GridVectorFunction
    """
    _check_coefficient(A, s, max_order=max_order)
    if f is not None:
        _check_forcing(A, f, s)
    q = numpy.array(q, dtype=complex)
    assert q.shape == (A.rows,), 'initial value should have length {}'.format(A.rows)
    samples = _integrate_rk4(A, q, forcing=f)
    samples[0] = q
    return GridVectorFunction(A.grid, _leibniz_levels(A, samples, s, forcing=f))


def solve_particular(A, f, s, max_order=DEFAULT_MAX_ORDER):
    """
    Particular solution of y' + A(t) y = f(t), normalized by y(a) = 0.

    :param GridMatrixFunction A: coefficient with derivatives up to s - 1
    :param GridVectorFunction f: right side with derivatives up to s - 1
    :param int s: derivative stack of solution is computed up to s
    :return: ParticularSolution
    """
    _check_coefficient(A, s, max_order=max_order)
    _check_forcing(A, f, s)
    return ParticularSolution(solve_cauchy(A, f, numpy.zeros(A.rows), s, max_order=max_order))


def ode_residual(A, y, f=None):
    """
    Max over nodes of |y' + A y - f|, where y' is obtained by 5-point differentiation of samples
    (the derivative stack is not used, so this is an independent check).

    :param GridMatrixFunction A: coefficient
    :param y: GridVectorFunction (or GridMatrixFunction to check fundamental matrix)
    :param f: None or GridVectorFunction
    :return: float
    """
    if A.grid != y.grid:
        raise GridMismatch('A and y are sampled on different grids')
    samples = y.level(0)
    residual = differentiate_samples(samples, y.grid.step, order=1) + _apply(A.level(0), samples)
    if f is not None:
        residual = residual - f.level(0)
    return numpy.max(numpy.linalg.norm(residual.reshape(len(residual), -1), axis=1))
