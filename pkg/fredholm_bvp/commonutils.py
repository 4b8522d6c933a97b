"""
**fredholm_bvp.commonutils** contains helpful functions, constants and exceptions
which are used by other modules of the package.
"""

from __future__ import print_function, division, absolute_import

from multiprocessing.pool import ThreadPool
import itertools
import numbers

import numpy

DEFAULT_N_STEPS = 2048
DEFAULT_MAX_ORDER = 5
# relative distance (in grid steps) under which a point is considered to be a node
NODE_TOLERANCE = 1e-9


# region Exceptions

class UnsupportedDerivativeOrder(ValueError):
    """Requested derivative order can't be delivered by a coefficient or a solver."""


class DerivativeStackTooShallow(UnsupportedDerivativeOrder):
    """Grid function doesn't carry derivatives needed by a boundary term."""


class PointOutsideInterval(ValueError):
    pass


class PointOffGrid(ValueError):
    """Point must coincide with a grid node, but doesn't."""


class PointTooCloseToB(ValueError):
    """Right-sided fractional derivative requested too close to the right end."""


class GridMismatch(ValueError):
    pass


class OddStepCount(ValueError):
    pass


class UnsupportedFractionalOrder(ValueError):
    pass


class SingularFundamentalMatrix(ArithmeticError):
    """Determinant of fundamental matrix collapsed: integration blow-up or too coarse grid."""


class ProblemFileError(ValueError):
    def __init__(self, message, field=None, line=None):
        """
        Error in problem file.

        :param str message: description
        :param str field: dotted path of the field, e.g. 'boundary.terms[1].coeff'
        :param int line: line of the document where the field (approximately) starts
        """
        self.message = message
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append('line {}'.format(line))
        if field is not None:
            location.append('field {}'.format(field))
        prefix = '{}: '.format(', '.join(location)) if location else ''
        super(ProblemFileError, self).__init__(prefix + message)


class RankUnstableWarning(UserWarning):
    """Numerical rank is decided with a small gap between kept and discarded singular values."""


# endregion


def _threads_wrapper(func_and_args):
    func = func_and_args[0]
    args = func_and_args[1:]
    return func(*args)


def map_on_threads(n_threads, func, *params):
    """
    The same as map, but the first argument is number of threads.
    Order of results is the order of arguments, independently of scheduling.

    :param n_threads: None or 1 to compute sequentially, otherwise number of threads in pool.
    :type n_threads: None or int
    :param func: function to apply
    :param params: sequences of arguments
    :return: list with results
    """
    if n_threads is None or n_threads <= 1:
        return list(map(func, *params))
    pool = ThreadPool(processes=n_threads)
    try:
        return pool.map(_threads_wrapper, zip(itertools.cycle([func]), *params))
    finally:
        pool.close()


def check_complex_matrix(matrix, shape=None, name='matrix'):
    """Converts to complex numpy.array of 2 dimensions, optionally checks the shape.

    :param matrix: array-like or number (number is treated as 1x1 matrix)
    :param shape: None or expected tuple (rows, cols)
    :return: numpy.array with dtype complex
    """
    if isinstance(matrix, numbers.Number):
        matrix = [[matrix]]
    matrix = numpy.array(matrix, dtype=complex)
    assert matrix.ndim == 2, '{} should be 2-dimensional, got shape {}'.format(name, matrix.shape)
    if shape is not None:
        assert matrix.shape == tuple(shape), \
            'wrong shape of {}: expected {}, got {}'.format(name, tuple(shape), matrix.shape)
    assert numpy.all(numpy.isfinite(matrix)), '{} contains non-finite values'.format(name)
    return matrix


def check_complex_vector(vector, length=None, name='vector'):
    """Converts to complex one-dimensional numpy.array, optionally checks length.

    :param vector: array-like or number
    :param length: None or expected length
    :return: numpy.array with dtype complex
    """
    vector = numpy.atleast_1d(numpy.array(vector, dtype=complex))
    assert vector.ndim == 1, '{} should be 1-dimensional'.format(name)
    if length is not None:
        assert len(vector) == length, 'wrong length of {}: expected {}, got {}'.format(name, length, len(vector))
    assert numpy.all(numpy.isfinite(vector)), '{} contains non-finite values'.format(name)
    return vector


def random_complex(random_state, shape, scale=1.):
    """Gaussian complex array, used to generate random directions and random problems."""
    return scale * (random_state.normal(size=shape) + 1j * random_state.normal(size=shape))
