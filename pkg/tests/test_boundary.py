from __future__ import division, print_function, absolute_import

import numpy
from numpy.random.mtrand import RandomState
from scipy.special import gamma

from fredholm_bvp.commonutils import UnsupportedDerivativeOrder, DerivativeStackTooShallow, PointOutsideInterval, \
    PointOffGrid, PointTooCloseToB, UnsupportedFractionalOrder, random_complex
from fredholm_bvp.functions import Interval, Grid, GridVectorFunction, ConstantCoefficient, PolynomialCoefficient, \
    materialize
from fredholm_bvp.fundamental import solve_fundamental
from fredholm_bvp.boundary import BoundaryOperator, PointDerivative, IntegralTerm, FractionalPointDerivative, \
    apply, apply_to_matrix, fractional_derivative, boundary_distance
from fredholm_bvp.oracles import random_boundary_operator, random_matrix_function, column_rule_error


def check_raises(exception, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except exception:
        return
    raise AssertionError('{} was not raised'.format(exception.__name__))


def sampled(grid, function, d_max=0):
    """Scalar function given by callables for each derivative level"""
    if callable(function):
        function = [function]
    values = numpy.array([f(grid.nodes) for f in function[:d_max + 1]])[:, :, numpy.newaxis]
    return GridVectorFunction(grid, values)


def test_two_point_conditions():
    grid = Grid(Interval(0., 1.), n_steps=32)
    B = BoundaryOperator([PointDerivative(0, 0., numpy.eye(2)), PointDerivative(0, 1., numpy.eye(2))], r=2, m=2, s=1)
    # y = (t, 1 - t)
    y = materialize(PolynomialCoefficient([[0., 1.], [1., -1.]]), grid, d_max=1)
    assert numpy.allclose(apply(B, y), [1., 1.])
    assert B.max_order == 0

    B = BoundaryOperator([PointDerivative(1, 0.3, [[1., 0.], [0., 2.]])], r=2, m=2, s=1)
    assert numpy.allclose(apply(B, y), [1., -2.])
    check_raises(DerivativeStackTooShallow, apply, B, y.truncated(0))


def test_derivative_conditions_column():
    # sum_k alpha_k Y^(k)(a) = sum_k alpha_k (-A)^k for constant A
    grid = Grid(Interval(0., 1.), n_steps=64)
    A = numpy.array([[0., 1.], [-1., 0.5]])
    Y = solve_fundamental(materialize(ConstantCoefficient(A), grid, d_max=1), s=2).Y
    alphas = [numpy.eye(2), numpy.diag([1., 0.]), random_complex(RandomState(1), (2, 2))]
    B = BoundaryOperator([PointDerivative(k, 0., alpha) for k, alpha in enumerate(alphas)], r=2, m=2, s=2)
    expected = alphas[0] - alphas[1].dot(A) + alphas[2].dot(A.dot(A))
    assert numpy.allclose(apply_to_matrix(B, Y), expected, atol=1e-12)
    assert numpy.allclose(apply(B, Y.column(1)), expected[:, 1], atol=1e-12)


def test_integral_term():
    grid = Grid(Interval(0., 2.), n_steps=64)
    term = IntegralTerm(ConstantCoefficient([[1., 0.], [0., 1.]]))
    # y = (t, t^2): integrals 2 and 8 / 3
    y = materialize(PolynomialCoefficient([[0., 0.], [1., 0.], [0., 1.]]), grid, d_max=0)
    assert numpy.allclose(term.evaluate(y), [2., 8. / 3], atol=1e-13)
    assert term.kernel_samples(grid) is term.kernel_samples(grid), 'kernel samples should be reused'
    assert term.shape == (2, 2) and term.required_order == 0


def test_kernel_samples_keep_last_grid():
    term = IntegralTerm(PolynomialCoefficient([[[1., 0.]], [[0., 2.]]]))
    first, second = Grid(Interval(0., 1.), n_steps=16), Grid(Interval(0., 1.), n_steps=32)
    samples = term.kernel_samples(first)
    assert term.kernel_samples(second).values.shape[1] == 33
    again = term.kernel_samples(first)
    assert again is not samples, 'only samples of the last grid are kept'
    assert numpy.array_equal(again.values, samples.values)
    assert term.kernel_samples(first) is again


def test_caputo_of_constant_vanishes():
    grid = Grid(Interval(0., 1.), n_steps=64)
    y = materialize(ConstantCoefficient([2., -1. + 1j]), grid, d_max=1)
    for alpha in [0.3, 0.5, 1.25, 1.5]:
        for node in [0, 16, 40]:
            value = fractional_derivative(y, alpha, 'caputo', grid.nodes[node])
            assert numpy.allclose(value, 0, atol=1e-12), (alpha, node, value)


def test_caputo_of_linear_function():
    # D_{b-}^alpha (b - t) = (b - t)^(1 - alpha) / Gamma(2 - alpha)
    grid = Grid(Interval(0., 1.), n_steps=512)
    y = sampled(grid, [lambda t: 1 - t, lambda t: -numpy.ones_like(t)], d_max=1)
    for alpha in [0.25, 0.5, 0.75]:
        for t in [0., 0.25, 0.5]:
            value = fractional_derivative(y, alpha, 'caputo', t)[0]
            expected = (1 - t) ** (1 - alpha) / gamma(2 - alpha)
            assert abs(value - expected) < 1e-6 * abs(expected), (alpha, t, value, expected)


def test_riemann_liouville_closed_forms():
    grid = Grid(Interval(0., 1.), n_steps=2048)
    constant = materialize(ConstantCoefficient([3.]), grid, d_max=0)
    for alpha in [0.25, 0.5, 0.75]:
        for t in [0., 0.25, 0.5, 0.75]:
            value = fractional_derivative(constant, alpha, 'riemann_liouville', t)[0]
            expected = 3. * (1 - t) ** (-alpha) / gamma(1 - alpha)
            assert abs(value - expected) < 1e-3 * abs(expected), (alpha, t, value, expected)

    for alpha in [0.25, 0.5, 0.75]:
        power = sampled(grid, lambda t: numpy.abs(1 - t) ** alpha)
        value = fractional_derivative(power, alpha, 'riemann_liouville', 0.25)[0]
        assert abs(value - gamma(alpha + 1)) < 1e-3 * gamma(alpha + 1), (alpha, value)


def test_fractional_errors():
    grid = Grid(Interval(0., 1.), n_steps=64)
    y = materialize(ConstantCoefficient([1.]), grid, d_max=1)
    check_raises(PointOffGrid, fractional_derivative, y, 0.5, 'caputo', 0.2 + grid.step / 3)
    check_raises(PointTooCloseToB, fractional_derivative, y, 0.5, 'caputo', grid.nodes[-4])
    fractional_derivative(y, 0.5, 'caputo', grid.nodes[-6])
    check_raises(PointOutsideInterval, fractional_derivative, y, 0.5, 'caputo', 1.5)
    check_raises(DerivativeStackTooShallow, fractional_derivative, y.truncated(0), 1.5, 'caputo', 0.)
    for alpha in [0., 1., 2., 2.5, -0.5]:
        check_raises(UnsupportedFractionalOrder, FractionalPointDerivative, alpha, 0., [[1.]])
        check_raises(UnsupportedFractionalOrder, fractional_derivative, y, alpha, 'caputo', 0.)
    # fractional point belongs to [a, b)
    check_raises(PointOutsideInterval, FractionalPointDerivative(0.5, 1., [[1.]]).check_interval, grid.interval)
    check_raises(PointOutsideInterval, PointDerivative(0, 2., [[1.]]).check_interval, grid.interval)


def test_required_orders():
    assert FractionalPointDerivative(1.5, 0., [[1.]], kind='caputo').required_order == 1
    assert FractionalPointDerivative(0.5, 0., [[1.]], kind='caputo').required_order == 0
    assert FractionalPointDerivative(1.5, 0., [[1.]], kind='riemann_liouville').required_order == 0
    check_raises(UnsupportedDerivativeOrder, BoundaryOperator, [PointDerivative(3, 0., [[1.]])], 1, 1, 2)


def test_linearity(n_trials=20):
    random = RandomState(5)
    interval = Interval(0., 1.)
    grid = Grid(interval, n_steps=64)
    for _ in range(n_trials):
        m = random.randint(1, 4)
        r = random.randint(1, 4)
        B = random_boundary_operator(random, r=r, m=m, s=2, interval=interval)
        y1 = materialize(PolynomialCoefficient(random_complex(random, (4, m))), grid, d_max=2)
        y2 = materialize(PolynomialCoefficient(random_complex(random, (4, m))), grid, d_max=2)
        c1, c2 = random_complex(random, 2)
        left = apply(B, c1 * y1 + c2 * y2)
        right = c1 * apply(B, y1) + c2 * apply(B, y2)
        assert numpy.linalg.norm(left - right) <= 1e-10 * numpy.linalg.norm(right)


def test_column_rule(n_triples=1000):
    random = RandomState(17)
    interval = Interval(0., 1.)
    grid = Grid(interval, n_steps=64)
    for _ in range(n_triples):
        m = random.randint(1, 4)
        r = random.randint(1, 5)
        B = random_boundary_operator(random, r=r, m=m, s=2, interval=interval)
        H = random_matrix_function(random, grid, m=m, d_max=2)
        error = column_rule_error(B, H, random_complex(random, m))
        assert error < 1e-10, 'column rule broken: {}'.format(error)


def test_sum_of_operators():
    random = RandomState(23)
    interval = Interval(0., 1.)
    grid = Grid(interval, n_steps=64)
    B1 = random_boundary_operator(random, r=2, m=2, s=1, interval=interval, kinds=['point', 'integral'])
    B2 = random_boundary_operator(random, r=2, m=2, s=2, interval=interval, kinds=['fractional'])
    y = materialize(PolynomialCoefficient(random_complex(random, (3, 2))), grid, d_max=2)
    total = B1 + B2
    assert total.s == 2 and len(total.terms) == len(B1.terms) + len(B2.terms)
    assert numpy.allclose(apply(total, y), apply(B1, y) + apply(B2, y), rtol=1e-12, atol=1e-12)


def test_replace_and_distance():
    grid = Grid(Interval(0., 1.), n_steps=64)
    term = FractionalPointDerivative(0.5, 0.25, [[1., 0.]], kind='riemann_liouville')
    moved = term.replace(point=0.5, alpha=0.75)
    assert (moved.point, moved.alpha, moved.kind) == (0.5, 0.75, 'riemann_liouville')
    assert (term.point, term.alpha) == (0.25, 0.5), 'original term should not change'
    check_raises(AssertionError, term.replace, order=2)

    B1 = BoundaryOperator([PointDerivative(0, 0., numpy.eye(2)), IntegralTerm(ConstantCoefficient(numpy.eye(2)))],
                          r=2, m=2, s=1)
    B2 = B1.replace_terms([PointDerivative(0, 0.25, 2 * numpy.eye(2)),
                           IntegralTerm(ConstantCoefficient(3 * numpy.eye(2)))])
    # |I|_F + 0.25 + |2 I|_F
    expected = numpy.sqrt(2) + 0.25 + 2 * numpy.sqrt(2)
    assert abs(boundary_distance(B1, B2, grid) - expected) < 1e-12
    assert boundary_distance(B1, B1, grid) == 0
