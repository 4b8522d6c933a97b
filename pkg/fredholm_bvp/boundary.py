"""
**fredholm_bvp.boundary** contains the general boundary operator B: (C^(s))^m -> C^r,
represented as a finite sum of terms:

* :class:`PointDerivative` - coeff * y^(k)(t_j)
* :class:`IntegralTerm` - integral over [a, b] of kernel(t) y(t)
* :class:`FractionalPointDerivative` - coeff * (D_{b-}^alpha y)(t_j), right-sided fractional derivative
  in the sense of Caputo or Riemann-Liouville

Operator acts on vector functions (:func:`apply`) and column-wise on matrix functions
(:func:`apply_to_matrix`), so that apply_to_matrix(B, Y).dot(d) == apply(B, Y.dot(d)).

Notice that right-sided Riemann-Liouville derivative of a constant is c (b - t)^(-alpha) / Gamma(1 - alpha),
which is not zero, while Caputo derivative of a constant vanishes.
Boundary conditions with fractional terms of a problem with A = 0 reduce to classical terms
only under the Caputo reading.

Examples
________

>>> B = BoundaryOperator([PointDerivative(0, 0., numpy.eye(2)),
>>>                       PointDerivative(0, 1., numpy.eye(2))], r=2, m=2, s=1)
>>> apply(B, y)  # y(0) + y(1)
>>> apply_to_matrix(B, fundamental.Y)  # characteristic matrix
"""

from __future__ import print_function, division, absolute_import

import math

import numpy
from scipy.special import gamma

from .commonutils import UnsupportedDerivativeOrder, DerivativeStackTooShallow, PointOutsideInterval, PointOffGrid, \
    PointTooCloseToB, UnsupportedFractionalOrder, check_complex_matrix
from .functions import AbstractCoefficient, STENCIL_SIZE, finite_difference_weights, interpolate, \
    integrate_product, materialize, GridVectorFunction, GridMatrixFunction

__all__ = ['PointDerivative', 'IntegralTerm', 'FractionalPointDerivative', 'BoundaryOperator',
           'apply', 'apply_to_matrix', 'fractional_derivative', 'boundary_distance']

CAPUTO = 'caputo'
RIEMANN_LIOUVILLE = 'riemann_liouville'
FRACTIONAL_KINDS = (CAPUTO, RIEMANN_LIOUVILLE)
# minimal number of grid steps between fractional point and the right end
MIN_STEPS_TO_B = 5


# region Terms

class AbstractBoundaryTerm(object):
    """
    Base class for terms of boundary operator. Terms are immutable,
    modified copies are obtained with :meth:`replace`.
    """
    # names of constructor parameters
    _param_names = ()

    def get_params(self):
        return {name: getattr(self, name) for name in self._param_names}

    def replace(self, **changes):
        """Returns a copy of term with some parameters changed"""
        params = self.get_params()
        for name in changes:
            assert name in params, 'unknown parameter {} of {}'.format(name, type(self).__name__)
        params.update(changes)
        return type(self)(**params)

    @property
    def shape(self):
        """(r, m) of term"""
        raise NotImplementedError('should be overriden in descendant')

    @property
    def required_order(self):
        """Highest derivative of y used by term"""
        return 0

    def check_interval(self, interval):
        pass

    def evaluate(self, y):
        """
        :param GridVectorFunction y: function with derivative stack
        :return: complex vector of length r
        """
        raise NotImplementedError('should be overriden in descendant')

    def __repr__(self):
        return '{}({})'.format(type(self).__name__,
                               ', '.join('{}={!r}'.format(k, v) for k, v in sorted(self.get_params().items())))


class PointDerivative(AbstractBoundaryTerm):
    _param_names = ('order', 'point', 'coeff')

    def __init__(self, order, point, coeff):
        """
        Term coeff * y^(order)(point).

        :param int order: derivative order, 0 means evaluation
        :param float point: point in [a, b]
        :param coeff: complex matrix r x m
        """
        assert int(order) == order and order >= 0, 'order should be non-negative integer, got {}'.format(order)
        self.order = int(order)
        self.point = float(point)
        self.coeff = check_complex_matrix(coeff, name='coeff')

    @property
    def shape(self):
        return self.coeff.shape

    @property
    def required_order(self):
        return self.order

    def check_interval(self, interval):
        if not interval.a <= self.point <= interval.b:
            raise PointOutsideInterval('point {} is outside of [{}, {}]'.format(self.point, interval.a, interval.b))

    def evaluate(self, y):
        return self.coeff.dot(interpolate(y, self.point, deriv=self.order))


class IntegralTerm(AbstractBoundaryTerm):
    _param_names = ('kernel',)

    def __init__(self, kernel):
        """
        Term integral_a^b kernel(t) y(t) dt. Kernel is sampled on the grid of y.

        :param AbstractCoefficient kernel: encoding of r x m matrix function
        """
        assert isinstance(kernel, AbstractCoefficient), 'kernel should be a coefficient encoding'
        assert len(kernel.shape) == 2, 'kernel should be matrix-valued'
        self.kernel = kernel
        self._cached = None

    @property
    def shape(self):
        return tuple(self.kernel.shape)

    def kernel_samples(self, grid):
        # samples of the last grid only
        if self._cached is None or self._cached[0] is not grid:
            self._cached = (grid, materialize(self.kernel, grid, d_max=0))
        return self._cached[1]

    def evaluate(self, y):
        return integrate_product(self.kernel_samples(y.grid), y)


class FractionalPointDerivative(AbstractBoundaryTerm):
    _param_names = ('alpha', 'point', 'coeff', 'kind')

    def __init__(self, alpha, point, coeff, kind=CAPUTO):
        """
        Term coeff * (D_{b-}^alpha y)(point), right-sided fractional derivative.

        :param float alpha: order in (0, 1) or (1, 2)
        :param float point: grid node in [a, b), at least 5 steps from b
        :param coeff: complex matrix r x m
        :param str kind: 'caputo' or 'riemann_liouville'
        """
        _check_fractional_order(alpha)
        assert kind in FRACTIONAL_KINDS, 'kind should be one of {}, got {}'.format(FRACTIONAL_KINDS, kind)
        self.alpha = float(alpha)
        self.point = float(point)
        self.coeff = check_complex_matrix(coeff, name='coeff')
        self.kind = kind

    @property
    def shape(self):
        return self.coeff.shape

    @property
    def required_order(self):
        # Caputo needs Taylor data at b
        if self.kind == CAPUTO:
            return int(math.ceil(self.alpha)) - 1
        return 0

    def check_interval(self, interval):
        if not interval.a <= self.point < interval.b:
            raise PointOutsideInterval('fractional point {} should be in [{}, {})'.format(
                self.point, interval.a, interval.b))

    def evaluate(self, y):
        return self.coeff.dot(fractional_derivative(y, self.alpha, self.kind, self.point))


# endregion


class BoundaryOperator(object):
    def __init__(self, terms, r, m, s):
        """
        Boundary operator B as sum of terms.

        :param list terms: AbstractBoundaryTerm, each of shape r x m
        :param int r: number of boundary conditions
        :param int m: dimension of the system
        :param int s: smoothness order of the space operator acts on; point derivatives have order <= s
        """
        assert r >= 1 and m >= 1, 'r and m should be positive, got {} and {}'.format(r, m)
        assert len(terms) > 0, 'boundary operator should have at least one term'
        for term in terms:
            assert isinstance(term, AbstractBoundaryTerm), 'wrong term {}'.format(term)
            assert tuple(term.shape) == (r, m), \
                'term {} has shape {}, expected {}'.format(type(term).__name__, term.shape, (r, m))
            if isinstance(term, PointDerivative) and term.order > s:
                raise UnsupportedDerivativeOrder('point derivative of order {} exceeds s = {}'.format(term.order, s))
        self.terms = tuple(terms)
        self.r = int(r)
        self.m = int(m)
        self.s = int(s)

    @property
    def max_order(self):
        """Highest derivative of y used by terms"""
        return max(term.required_order for term in self.terms)

    def check_interval(self, interval):
        for term in self.terms:
            term.check_interval(interval)

    def replace_terms(self, terms):
        return BoundaryOperator(terms, r=self.r, m=self.m, s=self.s)

    def __add__(self, other):
        assert (self.r, self.m) == (other.r, other.m), 'operators have different shapes'
        return BoundaryOperator(self.terms + other.terms, r=self.r, m=self.m, s=max(self.s, other.s))

    def __repr__(self):
        return 'BoundaryOperator(r={}, m={}, s={}, terms={!r})'.format(self.r, self.m, self.s, list(self.terms))


def apply(B, y):
    """
    Computes B y.

    :param BoundaryOperator B: boundary operator
    :param GridVectorFunction y: function with derivatives up to B.max_order
    :return: complex vector of length r
    """
    assert isinstance(y, GridVectorFunction), 'y should be GridVectorFunction'
    assert y.dim == B.m, 'dimension of y is {}, operator expects {}'.format(y.dim, B.m)
    if y.d_max < B.max_order:
        raise DerivativeStackTooShallow('operator needs derivatives up to {}, y carries {}'.format(
            B.max_order, y.d_max))
    result = numpy.zeros(B.r, dtype=complex)
    for term in B.terms:
        result += term.evaluate(y)
    return result


def apply_to_matrix(B, Y):
    """
    Column-wise application: column j of result is B applied to column j of Y.

    :param BoundaryOperator B: boundary operator
    :param GridMatrixFunction Y: matrix function with m columns
    :return: complex matrix r x m
    """
    assert isinstance(Y, GridMatrixFunction), 'Y should be GridMatrixFunction'
    assert Y.cols == B.m, 'Y has {} columns, operator expects {}'.format(Y.cols, B.m)
    return numpy.stack([apply(B, Y.column(j)) for j in range(Y.cols)], axis=1)


# region Fractional derivatives

def _check_fractional_order(alpha):
    if not (0 < alpha < 2) or float(alpha).is_integer():
        raise UnsupportedFractionalOrder('fractional order should be in (0, 1) or (1, 2), got {}'.format(alpha))


def _product_trapezoid_weights(n_segments, beta, step):
    """
    Weights w_l such that sum_l w_l g(t + l h) ~ integral_t^{t + n h} (tau - t)^(beta - 1) g(tau) d tau,
    g is replaced by its piecewise linear interpolant, the weight function is integrated exactly.
    """
    l = numpy.arange(n_segments + 1, dtype=float)
    first_moment = numpy.diff(l ** beta / beta)
    second_moment = numpy.diff(l ** (beta + 1) / (beta + 1))
    weights = numpy.zeros(n_segments + 1)
    weights[:-1] += l[1:] * first_moment - second_moment
    weights[1:] += second_moment - l[:-1] * first_moment
    return weights * step ** beta


def _right_fractional_integral(samples, node, beta, step):
    """Integral from nodes[node] to b of (tau - t)^(beta - 1) y(tau)"""
    tail = samples[node:]
    weights = _product_trapezoid_weights(len(tail) - 1, beta, step)
    return numpy.tensordot(weights, tail, axes=1)


def fractional_derivative(y, alpha, kind, t_j):
    """
    Right-sided fractional derivative D_{b-}^alpha y at grid node t_j.

    Riemann-Liouville derivative is

        (-1)^n / Gamma(n - alpha) d^n/dt^n integral_t^b (tau - t)^(n - alpha - 1) y(tau) d tau,  n = ceil(alpha),

    integral is computed with product trapezoidal rule, outer derivative with a 5-point stencil.
    Caputo derivative is Riemann-Liouville derivative of y minus its Taylor polynomial of degree n - 1 at b.

    :param GridVectorFunction y: function (Caputo with alpha > 1 needs first derivative)
    :param float alpha: order in (0, 1) or (1, 2)
    :param str kind: 'caputo' or 'riemann_liouville'
    :param float t_j: grid node, at least 5 grid steps left of b
    :return: complex vector of length m
    """
    _check_fractional_order(alpha)
    assert kind in FRACTIONAL_KINDS, 'kind should be one of {}, got {}'.format(FRACTIONAL_KINDS, kind)
    grid = y.grid
    node = grid.node_index(t_j)
    if node is None:
        raise PointOffGrid('fractional derivative needs a grid node, {} is not one (step {})'.format(t_j, grid.step))
    if grid.n_steps - node < MIN_STEPS_TO_B:
        raise PointTooCloseToB('point {} is closer than {} steps to b = {}'.format(t_j, MIN_STEPS_TO_B, grid.b))

    n = int(math.ceil(alpha))
    beta = n - alpha
    samples = y.level(0)
    if kind == CAPUTO:
        if y.d_max < n - 1:
            raise DerivativeStackTooShallow('Caputo derivative of order {} needs derivatives up to {}'.format(
                alpha, n - 1))
        shifts = grid.nodes - grid.b
        taylor = numpy.zeros(samples.shape, dtype=complex)
        for k in range(n):
            taylor += numpy.multiply.outer(shifts ** k / math.factorial(k), y.level(k)[-1])
        samples = samples - taylor

    start = min(max(node - STENCIL_SIZE // 2, 0), grid.n_steps - STENCIL_SIZE + 1)
    window = numpy.arange(start, start + STENCIL_SIZE)
    integrals = numpy.array([_right_fractional_integral(samples, i, beta, grid.step) for i in window])
    stencil = finite_difference_weights(window - node, n)
    derivative = numpy.tensordot(stencil, integrals, axes=1) / grid.step ** n
    return (-1) ** n / gamma(beta) * derivative


# endregion


def boundary_distance(B1, B2, grid=None):
    """
    Entrywise distance between boundary operators with the same term structure:
    sum over terms of |coeff1 - coeff2| (Frobenius) + |point1 - point2| + |alpha1 - alpha2|,
    integral kernels are compared by max node norm on grid.

    :return: float
    """
    assert len(B1.terms) == len(B2.terms), 'operators have different number of terms'
    distance = 0.
    for term1, term2 in zip(B1.terms, B2.terms):
        assert type(term1) == type(term2), 'operators have different structure'
        if isinstance(term1, IntegralTerm):
            assert grid is not None, 'grid is needed to compare integral kernels'
            diff = term1.kernel_samples(grid) - term2.kernel_samples(grid)
            distance += numpy.max(numpy.linalg.norm(diff.level(0), axis=(1, 2)))
            continue
        distance += numpy.linalg.norm(term1.coeff - term2.coeff) + abs(term1.point - term2.point)
        if isinstance(term1, FractionalPointDerivative):
            distance += abs(term1.alpha - term2.alpha)
    return distance
