"""
**fredholm_bvp.functions** contains representations of scalar, vector and matrix functions
on a finite interval [a, b] as dense samples on a uniform grid,
together with the stack of their derivatives.

All values are stored as complex numbers, even if input is real.

Coefficients of the problem (matrix A(t), right side f(t), integral kernels)
are described by *coefficient encodings* and materialized on a grid:

* :class:`ConstantCoefficient` - constant matrix or vector
* :class:`PolynomialCoefficient` - polynomial in t with matrix coefficients, derivatives are exact
* :class:`TrigonometricCoefficient` - amplitude * sin(frequency * t + phase) * matrix, derivatives are exact
* :class:`SampledCoefficient` - arbitrary callable, derivatives (up to second) by finite differences
* :class:`CoefficientSum` - weighted sum of encodings

Examples
________

>>> grid = Grid(Interval(0., 1.), n_steps=2048)
>>> A = PolynomialCoefficient([[[0, 1], [-1, 0]], [[1, 0], [0, 0]]])
>>> A_samples = materialize(A, grid, d_max=2)
>>> A_samples.values.shape
(3, 2049, 2, 2)
>>> interpolate(A_samples, 0.3, deriv=1)

Quadrature of kernel(t) y(t) over the interval (composite Simpson):

>>> integrate_product(kernel_samples, y_samples)
"""

from __future__ import print_function, division, absolute_import

import math
import numbers

import numpy
from scipy.integrate import simpson

from .commonutils import DEFAULT_N_STEPS, NODE_TOLERANCE, UnsupportedDerivativeOrder, DerivativeStackTooShallow, \
    PointOutsideInterval, GridMismatch, OddStepCount

__all__ = ['Interval', 'Grid', 'GridVectorFunction', 'GridMatrixFunction',
           'ConstantCoefficient', 'PolynomialCoefficient', 'TrigonometricCoefficient',
           'SampledCoefficient', 'CoefficientSum',
           'materialize', 'interpolate', 'integrate_product', 'grid_norm', 'sup_level_norm']

# highest derivative which finite differences are trusted to deliver for sampled coefficients
SAMPLED_MAX_ORDER = 2
STENCIL_SIZE = 5


class Interval(object):
    def __init__(self, a, b):
        """
        Finite interval [a, b], a < b.

        :param float a: left endpoint
        :param float b: right endpoint
        """
        a, b = float(a), float(b)
        if not (numpy.isfinite(a) and numpy.isfinite(b)):
            raise ValueError('interval endpoints should be finite, got {} and {}'.format(a, b))
        if not a < b:
            raise ValueError('left endpoint should be less than right one, got [{}, {}]'.format(a, b))
        self.a = a
        self.b = b

    @property
    def length(self):
        return self.b - self.a

    def __eq__(self, other):
        return isinstance(other, Interval) and self.a == other.a and self.b == other.b

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return 'Interval({!r}, {!r})'.format(self.a, self.b)


class Grid(object):
    def __init__(self, interval, n_steps=DEFAULT_N_STEPS):
        """
        Uniform grid over the interval: nodes[i] = a + i * (b - a) / n_steps.
        Endpoints are stored exactly.

        :param Interval interval: interval of the problem
        :param int n_steps: number of steps, at least 4 (five nodes are needed by stencils)
        """
        assert isinstance(interval, Interval), 'interval should be Interval'
        assert int(n_steps) == n_steps and n_steps >= STENCIL_SIZE - 1, \
            'n_steps should be integer >= {}, got {}'.format(STENCIL_SIZE - 1, n_steps)
        self.interval = interval
        self.n_steps = int(n_steps)
        self.step = interval.length / self.n_steps
        nodes = interval.a + numpy.arange(self.n_steps + 1) * self.step
        nodes[0] = interval.a
        nodes[-1] = interval.b
        nodes.flags.writeable = False
        self.nodes = nodes

    @property
    def a(self):
        return self.interval.a

    @property
    def b(self):
        return self.interval.b

    def check_point(self, t):
        """Raises PointOutsideInterval if t doesn't belong to [a, b]"""
        slack = NODE_TOLERANCE * self.step
        if not (self.a - slack <= t <= self.b + slack):
            raise PointOutsideInterval('point {} is outside of [{}, {}]'.format(t, self.a, self.b))

    def node_index(self, t, tolerance=NODE_TOLERANCE):
        """
        :param float t: point in [a, b]
        :param float tolerance: allowed distance to node, measured in grid steps
        :return: index of node coinciding with t (up to tolerance) or None
        """
        self.check_point(t)
        index = int(numpy.rint((t - self.a) / self.step))
        index = min(max(index, 0), self.n_steps)
        if abs(t - self.nodes[index]) <= tolerance * self.step:
            return index
        return None

    def __eq__(self, other):
        return isinstance(other, Grid) and self.interval == other.interval and self.n_steps == other.n_steps

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.interval, self.n_steps))

    def __repr__(self):
        return 'Grid({!r}, n_steps={})'.format(self.interval, self.n_steps)


class GridFunction(object):
    """
    Samples of function and its derivatives on the nodes of grid.
    values[d, i] is the d-th derivative at nodes[i]. Instances are immutable.
    """
    value_ndim = None
    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __init__(self, grid, values):
        values = numpy.array(values, dtype=complex)
        assert values.ndim == 2 + self.value_ndim, \
            'values should have {} dimensions, got shape {}'.format(2 + self.value_ndim, values.shape)
        assert values.shape[1] == grid.n_steps + 1, \
            'expected {} nodes, got {}'.format(grid.n_steps + 1, values.shape[1])
        values.flags.writeable = False
        self.grid = grid
        self.values = values

    @property
    def d_max(self):
        return self.values.shape[0] - 1

    @property
    def value_shape(self):
        return self.values.shape[2:]

    def level(self, deriv):
        """Samples of derivative of order `deriv`, array of shape [n_nodes] + value_shape"""
        if not 0 <= deriv <= self.d_max:
            raise DerivativeStackTooShallow('derivative of order {} requested, only {} stored'.format(deriv, self.d_max))
        return self.values[deriv]

    def truncated(self, d_max):
        self.level(d_max)
        return type(self)(self.grid, self.values[:d_max + 1])

    def _check_compatible(self, other):
        if self.grid != other.grid:
            raise GridMismatch('functions are sampled on different grids: {} and {}'.format(self.grid, other.grid))
        assert self.value_shape == other.value_shape, \
            'different shapes of values: {} {}'.format(self.value_shape, other.value_shape)

    def __add__(self, other):
        self._check_compatible(other)
        d_max = min(self.d_max, other.d_max)
        return type(self)(self.grid, self.values[:d_max + 1] + other.values[:d_max + 1])

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, number):
        assert isinstance(number, numbers.Number), 'only multiplication by numbers is supported'
        return type(self)(self.grid, self.values * number)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1)


class GridVectorFunction(GridFunction):
    """Samples of vector function of dimension m, values have shape [d_max + 1, n_nodes, m]"""
    value_ndim = 1

    @property
    def dim(self):
        return self.values.shape[2]


class GridMatrixFunction(GridFunction):
    """Samples of matrix function, values have shape [d_max + 1, n_nodes, rows, cols]"""
    value_ndim = 2

    @property
    def rows(self):
        return self.values.shape[2]

    @property
    def cols(self):
        return self.values.shape[3]

    def column(self, j):
        return GridVectorFunction(self.grid, self.values[:, :, :, j])

    def dot(self, vector):
        """Matrix function H times constant vector d, returns GridVectorFunction H(t) d"""
        vector = numpy.asarray(vector, dtype=complex)
        assert vector.shape == (self.cols,), 'wrong length of vector: {}'.format(vector.shape)
        return GridVectorFunction(self.grid, self.values.dot(vector))


def _wrap(grid, values, value_ndim):
    if value_ndim == 1:
        return GridVectorFunction(grid, values)
    return GridMatrixFunction(grid, values)


# region Finite differences

def finite_difference_weights(offsets, order):
    """
    Weights w of the stencil sum_j w_j f(x + offsets_j h) ~ h^order f^(order)(x).

    :param offsets: distinct integers (or floats), positions of stencil points in steps
    :param int order: order of derivative, less than number of points
    :return: numpy.array of the same length as offsets
    """
    offsets = numpy.asarray(offsets, dtype=float)
    assert order < len(offsets), 'stencil is too short for derivative of order {}'.format(order)
    vandermonde = numpy.vander(offsets, len(offsets), increasing=True).T
    rhs = numpy.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return numpy.linalg.solve(vandermonde, rhs)


def differentiate_samples(samples, step, order):
    """
    Derivative of sampled function using 5-point stencils,
    central in the interior and one-sided near the ends.

    :param samples: numpy.array of shape [n_nodes, ...], n_nodes >= 5
    :param float step: grid step
    :param int order: order of derivative (1 or 2 are usual)
    :return: numpy.array of the same shape
    """
    samples = numpy.asarray(samples)
    n_nodes = len(samples)
    assert n_nodes >= STENCIL_SIZE, 'at least {} samples needed'.format(STENCIL_SIZE)
    half = STENCIL_SIZE // 2
    result = numpy.zeros(samples.shape, dtype=complex)
    central_offsets = numpy.arange(-half, half + 1)
    central = finite_difference_weights(central_offsets, order)
    for offset, weight in zip(central_offsets, central):
        result[half:n_nodes - half] += weight * samples[half + offset:n_nodes - half + offset]
    for i in list(range(half)) + list(range(n_nodes - half, n_nodes)):
        start = min(max(i - half, 0), n_nodes - STENCIL_SIZE)
        weights = finite_difference_weights(numpy.arange(start, start + STENCIL_SIZE) - i, order)
        result[i] = numpy.tensordot(weights, samples[start:start + STENCIL_SIZE], axes=1)
    return result / step ** order


# endregion


# region Coefficient encodings

class AbstractCoefficient(object):
    """
    Base class for encodings of coefficients (A, f, integral kernels).
    Descendants define shape of values and compute samples of the derivative stack on grid.
    """
    # None means that derivatives of any order are available
    max_derivative_order = None
    shape = None

    def derivative_samples(self, grid, d_max):
        """
        :param Grid grid: grid to sample on
        :param int d_max: highest derivative order
        :return: numpy.array of shape [d_max + 1, n_nodes] + shape
        """
        raise NotImplementedError('should be overriden in descendant')


class ConstantCoefficient(AbstractCoefficient):
    def __init__(self, value):
        """
        :param value: constant matrix (2-dimensional) or vector (1-dimensional)
        """
        self.value = numpy.array(value, dtype=complex)
        assert self.value.ndim in [1, 2], 'constant should be a vector or a matrix'
        self.shape = self.value.shape

    def derivative_samples(self, grid, d_max):
        result = numpy.zeros((d_max + 1, grid.n_steps + 1) + self.shape, dtype=complex)
        result[0] = self.value
        return result


class PolynomialCoefficient(AbstractCoefficient):
    def __init__(self, coefficients):
        """
        Polynomial sum_p C_p t^p, derivatives are differentiated analytically.

        :param coefficients: list of matrices (or vectors) C_0, C_1, ... of the same shape
        """
        self.coefficients = numpy.array(coefficients, dtype=complex)
        assert self.coefficients.ndim in [2, 3] and len(self.coefficients) > 0, \
            'coefficients should be a non-empty list of vectors or matrices'
        self.shape = self.coefficients.shape[1:]

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def derivative_samples(self, grid, d_max):
        result = numpy.zeros((d_max + 1, grid.n_steps + 1) + self.shape, dtype=complex)
        powers = grid.nodes[:, numpy.newaxis] ** numpy.arange(len(self.coefficients))[numpy.newaxis, :]
        for d in range(d_max + 1):
            for p in range(d, len(self.coefficients)):
                factor = math.factorial(p) / math.factorial(p - d)
                result[d] += numpy.multiply.outer(factor * powers[:, p - d], self.coefficients[p])
        return result


class TrigonometricCoefficient(AbstractCoefficient):
    def __init__(self, value, amplitude=1., frequency=1., phase=0.):
        """
        amplitude * sin(frequency * t + phase) * value, derivatives are exact.

        :param value: constant matrix or vector
        """
        self.value = numpy.array(value, dtype=complex)
        assert self.value.ndim in [1, 2], 'value should be a vector or a matrix'
        self.shape = self.value.shape
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        self.phase = float(phase)

    def derivative_samples(self, grid, d_max):
        result = numpy.zeros((d_max + 1, grid.n_steps + 1) + self.shape, dtype=complex)
        for d in range(d_max + 1):
            scalar = self.amplitude * self.frequency ** d * \
                numpy.sin(self.frequency * grid.nodes + self.phase + d * numpy.pi / 2)
            result[d] = numpy.multiply.outer(scalar, self.value)
        return result


class SampledCoefficient(AbstractCoefficient):
    max_derivative_order = SAMPLED_MAX_ORDER

    def __init__(self, function, shape=None):
        """
        Coefficient given by a callable. Derivatives are computed by 5-point finite differences,
        so only derivatives up to second order are available.
        Smoothness of function can't be checked and is assumed.

        :param function: callable, function(t) returns number, vector or matrix
        :param shape: None or shape of values (scalar results are reshaped to it, default is (1, 1))
        """
        self.function = function
        self.shape = None if shape is None else tuple(shape)

    def derivative_samples(self, grid, d_max):
        samples = numpy.array([self.function(t) for t in grid.nodes], dtype=complex)
        shape = self.shape
        if shape is None:
            shape = samples.shape[1:] if samples.ndim > 1 else (1, 1)
        samples = samples.reshape((grid.n_steps + 1,) + tuple(shape))
        result = numpy.zeros((d_max + 1,) + samples.shape, dtype=complex)
        result[0] = samples
        for d in range(1, d_max + 1):
            result[d] = differentiate_samples(samples, grid.step, order=d)
        return result


class CoefficientSum(AbstractCoefficient):
    def __init__(self, coefficients, weights=None):
        """
        Weighted sum of coefficient encodings of the same shape.

        :param coefficients: list of AbstractCoefficient
        :param weights: None (all ones) or list of numbers
        """
        assert len(coefficients) > 0, 'at least one coefficient is needed'
        if weights is None:
            weights = [1.] * len(coefficients)
        assert len(weights) == len(coefficients), 'number of weights differs from number of coefficients'
        shapes = set(tuple(coefficient.shape) for coefficient in coefficients)
        assert len(shapes) == 1, 'coefficients have different shapes: {}'.format(shapes)
        self.coefficients = list(coefficients)
        self.weights = [complex(weight) for weight in weights]
        self.shape = tuple(coefficients[0].shape)
        orders = [c.max_derivative_order for c in coefficients if c.max_derivative_order is not None]
        self.max_derivative_order = min(orders) if len(orders) > 0 else None

    def derivative_samples(self, grid, d_max):
        result = numpy.zeros((d_max + 1, grid.n_steps + 1) + self.shape, dtype=complex)
        for coefficient, weight in zip(self.coefficients, self.weights):
            if weight != 0:
                result += weight * coefficient.derivative_samples(grid, d_max)
        return result


def materialize(coefficient, grid, d_max):
    """
    Samples coefficient and its derivatives up to d_max on the grid.

    :param AbstractCoefficient coefficient: encoding of coefficient
    :param Grid grid: grid
    :param int d_max: highest derivative order, non-negative
    :return: GridMatrixFunction for matrix coefficients, GridVectorFunction for vector ones
    """
    assert isinstance(coefficient, AbstractCoefficient), 'coefficient should be derived from AbstractCoefficient'
    assert d_max >= 0, 'd_max should be non-negative'
    limit = coefficient.max_derivative_order
    if limit is not None and d_max > limit:
        raise UnsupportedDerivativeOrder('{} provides derivatives up to order {}, requested {}'.format(
            type(coefficient).__name__, limit, d_max))
    values = coefficient.derivative_samples(grid, d_max)
    return _wrap(grid, values, value_ndim=values.ndim - 2)


# endregion


# region Interpolation, quadrature, norms

def _lagrange_window(grid, points):
    """For each point returns first index of 5-node window (centered, clamped at the ends)
    and Lagrange weights of the nodes inside the window"""
    x = (numpy.asarray(points, dtype=float) - grid.a) / grid.step
    half = STENCIL_SIZE // 2
    start = numpy.clip(numpy.rint(x).astype(int) - half, 0, grid.n_steps - STENCIL_SIZE + 1)
    local = x - start
    weights = numpy.ones((len(local), STENCIL_SIZE))
    for j in range(STENCIL_SIZE):
        for k in range(STENCIL_SIZE):
            if k != j:
                weights[:, j] *= (local - k) / (j - k)
    return start, weights


def interpolate_many(fun, points, deriv=0):
    """
    Vectorized 5-point Lagrange interpolation of stored derivative level at many points
    (no check that points are nodes).

    :return: numpy.array of shape [n_points] + value_shape
    """
    samples = fun.level(deriv)
    start, weights = _lagrange_window(fun.grid, points)
    windows = samples[start[:, numpy.newaxis] + numpy.arange(STENCIL_SIZE)[numpy.newaxis, :]]
    return numpy.einsum('pj,pj...->p...', weights, windows)


def interpolate(fun, t, deriv=0):
    """
    Value of derivative of order `deriv` at point t.
    At grid nodes the stored sample is returned, otherwise 5-point Lagrange interpolation is used.

    :param fun: GridVectorFunction or GridMatrixFunction
    :param float t: point in [a, b]
    :param int deriv: derivative order, at most fun.d_max
    :return: complex numpy.array of value shape
    """
    samples = fun.level(deriv)
    index = fun.grid.node_index(t)
    if index is not None:
        return samples[index].copy()
    return interpolate_many(fun, [t], deriv=deriv)[0]


def integrate_product(kernel, fun):
    """
    Composite Simpson approximation of integral of kernel(t) fun(t) over [a, b].

    :param GridMatrixFunction kernel: r x m matrix function
    :param GridVectorFunction fun: m-vector function on the same grid
    :return: complex numpy.array of length r
    """
    if kernel.grid != fun.grid:
        raise GridMismatch('kernel and function are sampled on different grids')
    if kernel.grid.n_steps % 2 != 0:
        raise OddStepCount('composite Simpson rule requires even number of steps, got {}'.format(kernel.grid.n_steps))
    assert kernel.cols == fun.dim, 'kernel has {} columns, function has dimension {}'.format(kernel.cols, fun.dim)
    integrand = numpy.einsum('irm,im->ir', kernel.values[0], fun.values[0])
    step = kernel.grid.step
    return simpson(integrand.real, dx=step, axis=0) + 1j * simpson(integrand.imag, dx=step, axis=0)


def _node_norms(fun, deriv):
    samples = fun.level(deriv)
    return numpy.linalg.norm(samples.reshape(len(samples), -1), axis=1)


def grid_norm(fun, order):
    """Sum over derivative levels 0..order of max node-wise (Frobenius) norm.
    Grid realization of the norm of C^(order); behaviour between nodes is not controlled."""
    return sum(numpy.max(_node_norms(fun, d)) for d in range(order + 1))


def sup_level_norm(fun, order):
    """Max over derivative levels 0..order of max node-wise (Frobenius) norm"""
    return max(numpy.max(_node_norms(fun, d)) for d in range(order + 1))

# endregion
