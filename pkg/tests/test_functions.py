from __future__ import division, print_function, absolute_import

import numpy
from numpy.random.mtrand import RandomState

from fredholm_bvp.commonutils import UnsupportedDerivativeOrder, DerivativeStackTooShallow, PointOutsideInterval, \
    GridMismatch, OddStepCount
from fredholm_bvp.functions import Interval, Grid, GridVectorFunction, GridMatrixFunction, ConstantCoefficient, \
    PolynomialCoefficient, TrigonometricCoefficient, SampledCoefficient, CoefficientSum, materialize, interpolate, \
    integrate_product, grid_norm, sup_level_norm, differentiate_samples, finite_difference_weights


def check_raises(exception, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except exception:
        return
    raise AssertionError('{} was not raised'.format(exception.__name__))


def scalar_function(grid, function):
    return GridVectorFunction(grid, numpy.array([function(grid.nodes)[:, numpy.newaxis]]))


def test_interval_and_grid():
    check_raises(ValueError, Interval, 1., 1.)
    check_raises(ValueError, Interval, 0., numpy.inf)
    grid = Grid(Interval(0.1, 0.7), n_steps=30)
    assert grid.nodes[0] == 0.1 and grid.nodes[-1] == 0.7, 'endpoints are not exact'
    assert numpy.allclose(numpy.diff(grid.nodes), 0.02), 'grid is not uniform'
    assert grid.node_index(0.1 + 0.02 * 7) == 7
    assert grid.node_index(0.1 + 0.02 * 7.5) is None
    check_raises(PointOutsideInterval, grid.node_index, 0.8)
    assert grid == Grid(Interval(0.1, 0.7), n_steps=30)
    assert grid != Grid(Interval(0.1, 0.7), n_steps=32)


def test_materialize_constant_and_polynomial():
    grid = Grid(Interval(0., 1.), n_steps=16)
    A = numpy.array([[1., 2.], [3., 4.]])
    samples = materialize(ConstantCoefficient(A), grid, d_max=1)
    assert isinstance(samples, GridMatrixFunction)
    assert numpy.all(samples.level(0) == A) and numpy.all(samples.level(1) == 0)

    A0, A1 = numpy.eye(2), numpy.array([[0., 1.], [-1., 0.]])
    samples = materialize(PolynomialCoefficient([A0, A1]), grid, d_max=2)
    assert numpy.allclose(samples.level(0), A0 + grid.nodes[:, None, None] * A1)
    assert numpy.all(samples.level(1) == A1) and numpy.all(samples.level(2) == 0)

    # cubic, derivatives are exact
    cubic = materialize(PolynomialCoefficient([[0.], [0.], [0.], [1.]]), grid, d_max=3)
    t = grid.nodes
    for level, expected in enumerate([t ** 3, 3 * t ** 2, 6 * t, 6 + 0 * t]):
        assert numpy.allclose(cubic.level(level)[:, 0], expected, atol=1e-13), 'wrong derivative {}'.format(level)

    vector = materialize(ConstantCoefficient([1., 2., 3.]), grid, d_max=0)
    assert isinstance(vector, GridVectorFunction) and vector.dim == 3


def test_materialize_trigonometric_and_sum():
    grid = Grid(Interval(0., 2.), n_steps=32)
    coefficient = TrigonometricCoefficient(numpy.eye(2), amplitude=0.5, frequency=3., phase=0.2)
    samples = materialize(coefficient, grid, d_max=2)
    t = grid.nodes
    assert numpy.allclose(samples.level(0)[:, 0, 0], 0.5 * numpy.sin(3 * t + 0.2))
    assert numpy.allclose(samples.level(1)[:, 1, 1], 1.5 * numpy.cos(3 * t + 0.2))
    assert numpy.allclose(samples.level(2)[:, 0, 0], -4.5 * numpy.sin(3 * t + 0.2))
    assert numpy.allclose(samples.level(0)[:, 0, 1], 0)

    total = CoefficientSum([ConstantCoefficient(numpy.eye(2)), coefficient], weights=[2., -1.])
    total_samples = materialize(total, grid, d_max=2)
    assert numpy.allclose(total_samples.level(0), 2 * numpy.eye(2) - samples.level(0))
    assert numpy.allclose(total_samples.level(2), -samples.level(2))


def test_sampled_coefficient():
    grid = Grid(Interval(0., 1.), n_steps=1000)
    samples = materialize(SampledCoefficient(numpy.sin), grid, d_max=1)
    assert samples.value_shape == (1, 1)
    assert numpy.max(numpy.abs(samples.level(1)[:, 0, 0] - numpy.cos(grid.nodes))) < 1e-6
    check_raises(UnsupportedDerivativeOrder, materialize, SampledCoefficient(numpy.sin), grid, 3)
    summed = CoefficientSum([SampledCoefficient(numpy.sin, shape=(1, 1)), ConstantCoefficient([[1.]])])
    check_raises(UnsupportedDerivativeOrder, materialize, summed, grid, 3)


def test_interpolation():
    grid = Grid(Interval(0., 1.), n_steps=100)
    quartic = scalar_function(grid, lambda t: t ** 4)
    assert abs(interpolate(quartic, 0.505)[0] - 0.505 ** 4) < 1e-10
    # ends use shifted windows
    assert abs(interpolate(quartic, 0.003)[0] - 0.003 ** 4) < 1e-10
    assert abs(interpolate(quartic, 0.998)[0] - 0.998 ** 4) < 1e-10
    for index in [0, 1, 37, 99, 100]:
        assert interpolate(quartic, grid.nodes[index])[0] == quartic.values[0, index, 0], 'not exact at node'

    constant = materialize(ConstantCoefficient([2. + 1j, -1.]), grid, d_max=1)
    for t in RandomState(42).uniform(0, 1, size=20):
        assert numpy.allclose(interpolate(constant, t), [2. + 1j, -1.])
        assert numpy.allclose(interpolate(constant, t, deriv=1), 0)
    check_raises(PointOutsideInterval, interpolate, constant, 1.5)
    check_raises(DerivativeStackTooShallow, interpolate, constant, 0.5, deriv=2)


def test_integrate_product():
    grid = Grid(Interval(0., 1.), n_steps=100)
    one = materialize(ConstantCoefficient([[1.]]), grid, d_max=0)
    assert abs(integrate_product(one, scalar_function(grid, lambda t: t ** 0))[0] - 1.) < 1e-14
    assert abs(integrate_product(one, scalar_function(grid, lambda t: t ** 3))[0] - 0.25) < 1e-14
    assert abs(integrate_product(one, scalar_function(grid, numpy.exp))[0] - (numpy.e - 1)) < 1e-9

    def simpson_error(n_steps):
        fine = Grid(Interval(0., 1.), n_steps=n_steps)
        kernel = materialize(ConstantCoefficient([[1.]]), fine, d_max=0)
        return abs(integrate_product(kernel, scalar_function(fine, numpy.exp))[0] - (numpy.e - 1))

    ratio = simpson_error(8) / simpson_error(16)
    assert 12 <= ratio <= 20, 'Simpson order is broken, ratio {}'.format(ratio)

    kernel = materialize(PolynomialCoefficient([[[1., 0.], [0., 0.]], [[0., 0.], [1., 0.]]]), grid, d_max=0)
    vector = materialize(PolynomialCoefficient([[0., 1.], [1., 0.]]), grid, d_max=0)
    # kernel = [[1, 0], [t, 0]], vector = (t, 1)
    assert numpy.allclose(integrate_product(kernel, vector), [0.5, 1. / 3], atol=1e-13)

    check_raises(OddStepCount, integrate_product, materialize(ConstantCoefficient([[1.]]), Grid(Interval(0, 1), 5), 0),
                 materialize(ConstantCoefficient([1.]), Grid(Interval(0, 1), 5), 0))
    check_raises(GridMismatch, integrate_product, one, materialize(ConstantCoefficient([1.]), Grid(Interval(0, 1), 50), 0))


def test_linearity(n_trials=10):
    random = RandomState(11)
    grid = Grid(Interval(-1., 1.), n_steps=64)
    kernel = materialize(PolynomialCoefficient(random.normal(size=(3, 2, 3))), grid, d_max=0)
    for _ in range(n_trials):
        p1, p2 = random.normal(size=(2, 4, 3))
        c1, c2 = random.normal(size=2) + 1j * random.normal(size=2)
        f1 = materialize(PolynomialCoefficient(p1), grid, d_max=1)
        f2 = materialize(PolynomialCoefficient(p2), grid, d_max=1)
        combined = materialize(CoefficientSum([PolynomialCoefficient(p1), PolynomialCoefficient(p2)], [c1, c2]),
                               grid, d_max=1)
        assert numpy.allclose(combined.values, (c1 * f1 + c2 * f2).values, rtol=1e-12, atol=1e-12)
        left = integrate_product(kernel, c1 * f1 + c2 * f2)
        right = c1 * integrate_product(kernel, f1) + c2 * integrate_product(kernel, f2)
        assert numpy.linalg.norm(left - right) <= 1e-12 * numpy.linalg.norm(right)


def test_grid_function_arithmetics():
    grid = Grid(Interval(0., 1.), n_steps=8)
    f = materialize(PolynomialCoefficient([[1., 0.], [0., 1.]]), grid, d_max=2)
    g = materialize(ConstantCoefficient([1., 1.]), grid, d_max=1)
    total = f + g
    assert total.d_max == 1, 'sum keeps only common derivative levels'
    assert numpy.allclose((f - f).values, 0)
    assert numpy.allclose((-f).values, -f.values)
    assert numpy.allclose((2 * f).values, (f * 2).values)
    check_raises(GridMismatch, lambda: f + materialize(ConstantCoefficient([1., 1.]), Grid(Interval(0, 1), 16), 1))
    check_raises(ValueError, f.values.__setitem__, (0, 0, 0), 1.)


def test_norms():
    grid = Grid(Interval(0., 1.), n_steps=16)
    identity = materialize(ConstantCoefficient(numpy.eye(2)), grid, d_max=1)
    assert abs(grid_norm(identity, 1) - numpy.sqrt(2)) < 1e-14
    line = materialize(PolynomialCoefficient([[0.], [2.]]), grid, d_max=1)
    # sup |2t| = 2, sup |2| = 2
    assert abs(grid_norm(line, 1) - 4.) < 1e-14
    assert abs(sup_level_norm(line, 1) - 2.) < 1e-14
    assert abs(sup_level_norm(line, 0) - 2.) < 1e-14


def test_finite_differences():
    assert numpy.allclose(finite_difference_weights([-1, 0, 1], 1), [-0.5, 0, 0.5])
    assert numpy.allclose(finite_difference_weights([-2, -1, 0, 1, 2], 2), [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])
    grid = Grid(Interval(0., 1.), n_steps=256)
    derivative = differentiate_samples(numpy.sin(grid.nodes), grid.step, order=1)
    assert numpy.max(numpy.abs(derivative - numpy.cos(grid.nodes))) < 1e-8
    second = differentiate_samples(numpy.sin(grid.nodes), grid.step, order=2)
    assert numpy.max(numpy.abs(second + numpy.sin(grid.nodes))) < 1e-5
