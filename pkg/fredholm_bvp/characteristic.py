"""
**fredholm_bvp.characteristic** builds the characteristic matrix M = [BY] of a boundary-value problem
and computes Fredholm numbers of the problem from it.

j-th column of M is the boundary operator B applied to j-th column of fundamental matrix Y,
so M is r x m, where r is number of boundary conditions and m is dimension of the system.

* dim ker = m - rank M
* dim coker = r - rank M
* index = m - r, independently of A and B
* problem is invertible iff r = m and M is nonsingular

Rank is numerical: number of singular values above tolerance max(r, m) * max(sigma_max, scale) * 1e-10,
where scale is the sum of norms of the matrices contributed by separate terms of B.
When the terms cancel (e.g. periodic conditions with Y(b) = I), M is rounding noise and its rank is 0.
When the gap between kept and discarded singular values is small,
:class:`fredholm_bvp.commonutils.RankUnstableWarning` is emitted.

Examples
________

>>> cm = characteristic_matrix(ConstantCoefficient(A), B, Grid(Interval(0, 1)), s=1)
>>> report = fredholm_report(cm)
>>> report.dim_ker, report.dim_coker, report.index
"""

from __future__ import print_function, division, absolute_import

import warnings
from collections import OrderedDict

import numpy
from scipy.linalg import svd

from .commonutils import RankUnstableWarning, DerivativeStackTooShallow
from .functions import GridMatrixFunction, materialize
from .fundamental import solve_fundamental

__all__ = ['CharacteristicMatrix', 'FredholmReport', 'characteristic_matrix', 'characteristic_from_fundamental',
           'numeric_rank', 'fredholm_report']

RELATIVE_RANK_TOLERANCE = 1e-10
MIN_SPECTRAL_GAP = 10.

SQUARE = 'square'
OVERDETERMINED = 'overdetermined'
UNDERDETERMINED = 'underdetermined'


def default_rank_tolerance(singular_values, shape, scale=None):
    """max(r, m) * 1e-10 * reference, reference is the largest of sigma_max and scale"""
    sigma_max = singular_values[0] if len(singular_values) > 0 else 0.
    reference = sigma_max if scale is None else max(sigma_max, scale)
    return max(shape) * reference * RELATIVE_RANK_TOLERANCE


def numeric_rank(M, tol=None, scale=None):
    """
    Numerical rank of matrix.

    :param M: complex matrix r x m
    :param tol: None (relative default) or absolute threshold for singular values
    :param scale: None or magnitude of the data M was summed from, floors the relative default
    :return: tuple (rank, singular_values), singular values are non-increasing
    """
    M = numpy.atleast_2d(numpy.asarray(M, dtype=complex))
    singular_values = svd(M, compute_uv=False)
    if tol is None:
        tol = default_rank_tolerance(singular_values, M.shape, scale=scale)
    return int(numpy.sum(singular_values > tol)), singular_values


def _spectral_gap(singular_values, rank, tol):
    """Ratio of smallest kept singular value to largest discarded one, always finite"""
    sigma_max = singular_values[0] if len(singular_values) > 0 else 0.
    floor = numpy.finfo(float).eps * max(sigma_max, 1.)
    upper = singular_values[rank - 1] if rank > 0 else max(tol, floor)
    lower = singular_values[rank] if rank < len(singular_values) else tol
    return float(upper / max(lower, floor))


class CharacteristicMatrix(object):
    def __init__(self, M, rank_tol=None, scale=None):
        """
        Characteristic matrix with its singular value decomposition.

        :param M: complex matrix r x m
        :param rank_tol: None or absolute rank tolerance
        :param scale: None or sum of norms of the terms M is summed from, used by default tolerance
        """
        self.M = numpy.atleast_2d(numpy.array(M, dtype=complex))
        self.scale = scale
        self.rank, self.singular_values = numeric_rank(self.M, tol=rank_tol, scale=scale)
        if rank_tol is None:
            rank_tol = default_rank_tolerance(self.singular_values, self.M.shape, scale=scale)
        self.rank_tolerance = float(rank_tol)

    @property
    def r(self):
        return self.M.shape[0]

    @property
    def m(self):
        return self.M.shape[1]

    @property
    def spectral_gap(self):
        return _spectral_gap(self.singular_values, self.rank, self.rank_tolerance)

    def kernel_vectors(self):
        """Orthonormal basis of numerical kernel of M, complex array of shape [m - rank, m]"""
        _, _, vh = svd(self.M)
        return vh[self.rank:].conj()

    def cokernel_vectors(self):
        """
        Orthonormal basis of complement of the column space of M, shape [r - rank, r].
        B y = c is solvable iff (c - B y_p) is orthogonal to these vectors.
        """
        u, _, _ = svd(self.M)
        return u[:, self.rank:].T


class FredholmReport(object):
    _fields = ['m', 'r', 'rank', 'dim_ker', 'dim_coker', 'index', 'invertible', 'spectral_gap',
               'problem_type', 'warnings']

    def __init__(self, m, r, rank, spectral_gap, warnings=()):
        self.m = m
        self.r = r
        self.rank = rank
        self.dim_ker = m - rank
        self.dim_coker = r - rank
        self.index = m - r
        self.invertible = (r == m) and (self.dim_ker == 0)
        self.spectral_gap = spectral_gap
        if r == m:
            self.problem_type = SQUARE
        elif r > m:
            self.problem_type = OVERDETERMINED
        else:
            self.problem_type = UNDERDETERMINED
        self.warnings = list(warnings)

    def to_dict(self):
        return OrderedDict((field, getattr(self, field)) for field in self._fields)

    def __repr__(self):
        return 'FredholmReport({})'.format(', '.join('{}={!r}'.format(k, v) for k, v in self.to_dict().items()))


def characteristic_matrix(A, B, grid, s, rank_tol=None, max_order=None):
    """
    Computes M = [BY] for the system y' + A y = f with boundary operator B.

    :param A: AbstractCoefficient for m x m matrix A(t)
    :param BoundaryOperator B: boundary operator with B.m = m
    :param Grid grid: integration grid
    :param int s: smoothness order, at least highest derivative order used by B
    :param rank_tol: None or absolute rank tolerance
    :return: CharacteristicMatrix
    """
    assert B.max_order <= s, 'operator uses derivatives up to {}, s = {}'.format(B.max_order, s)
    A_samples = materialize(A, grid, d_max=s - 1)
    assert A_samples.rows == B.m, 'A is {}x{}, operator expects m = {}'.format(A_samples.rows, A_samples.cols, B.m)
    kwargs = {} if max_order is None else {'max_order': max_order}
    fundamental = solve_fundamental(A_samples, s, **kwargs)
    return characteristic_from_fundamental(B, fundamental.Y, rank_tol=rank_tol)


def characteristic_from_fundamental(B, Y, rank_tol=None):
    """
    M = [BY] from samples of fundamental matrix. Terms of B are applied separately,
    the sum of spectral norms of their contributions is the scale of default rank tolerance.

    :param BoundaryOperator B: boundary operator
    :param GridMatrixFunction Y: fundamental matrix with derivative stack up to B.max_order
    :param rank_tol: None or absolute rank tolerance
    :return: CharacteristicMatrix
    """
    assert isinstance(Y, GridMatrixFunction), 'Y should be GridMatrixFunction'
    assert Y.cols == B.m, 'Y has {} columns, operator expects {}'.format(Y.cols, B.m)
    if Y.d_max < B.max_order:
        raise DerivativeStackTooShallow('operator needs derivatives up to {}, Y carries {}'.format(
            B.max_order, Y.d_max))
    columns = [Y.column(j) for j in range(Y.cols)]
    M = numpy.zeros((B.r, B.m), dtype=complex)
    scale = 0.
    for term in B.terms:
        contribution = numpy.stack([term.evaluate(column) for column in columns], axis=1)
        M += contribution
        scale += numpy.linalg.norm(contribution, 2)
    return CharacteristicMatrix(M, rank_tol=rank_tol, scale=scale)


def fredholm_report(cm):
    """
    Fredholm numbers of the problem from its characteristic matrix.
    Emits RankUnstableWarning if spectral gap is below 10 (except exact zero matrix).

    :param CharacteristicMatrix cm: characteristic matrix
    :return: FredholmReport
    """
    gap = cm.spectral_gap
    messages = []
    if len(cm.singular_values) > 0 and cm.singular_values[0] > 0 and gap < MIN_SPECTRAL_GAP:
        message = 'rank {} of characteristic matrix is unstable: spectral gap {:.3g}, singular values {}'.format(
            cm.rank, gap, numpy.array2string(cm.singular_values, precision=3))
        warnings.warn(message, RankUnstableWarning)
        messages.append(message)
    return FredholmReport(m=cm.m, r=cm.r, rank=cm.rank, spectral_gap=gap, warnings=messages)
