"""
**fredholm_bvp.problemfile** reads and writes problem definition files.

Problem file is a JSON document. Complex numbers are written as pairs [re, im]
(plain real numbers are also accepted on reading), matrices are nested row-major lists.

.. code-block:: json

    {
      "interval": {"a": 0.0, "b": 1.0},
      "system": {
        "m": 2, "s": 1,
        "A": {"kind": "constant", "value": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]]},
        "f": {"kind": "constant", "value": [[0, 0], [0, 0]]}
      },
      "boundary": {
        "r": 2,
        "terms": [
          {"variant": "point", "order": 0, "point": 0.0, "coeff": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
        ]
      },
      "data": {"c": [[1, 0], [0, 0]]},
      "grid": {"n_steps": 2048},
      "limits": {"mode": "coefficient", "perturbation": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                 "eps_schedule": "inverse", "k_list": [1, 2, 4, 8, 16, 32, 64]}
    }

Coefficient kinds: `constant` (value), `polynomial` (coefficients, list of matrices of increasing power),
`trigonometric` (value, amplitude, frequency, phase), `sum` (terms, weights).
Boundary term variants: `point` (order, point, coeff), `integral` (kernel),
`fractional` (alpha, kind, point, coeff).

Examples
________

>>> definition = load_problem('cauchy.json')
>>> definition.problem.m, definition.n_steps
>>> text = dumps_problem(definition)
>>> problem_hash(definition)
"""

from __future__ import print_function, division, absolute_import

import hashlib
import json
import numbers
from collections import OrderedDict

import numpy

from .commonutils import DEFAULT_N_STEPS, ProblemFileError
from .functions import Interval, AbstractCoefficient, ConstantCoefficient, PolynomialCoefficient, \
    TrigonometricCoefficient, CoefficientSum
from .boundary import BoundaryOperator, PointDerivative, IntegralTerm, FractionalPointDerivative
from .solver import BvpProblem
from .limits import PerturbationFamily, SCHEDULES, DEFAULT_K_LIST

__all__ = ['ProblemFileError', 'ProblemDefinition', 'parse_problem', 'loads_problem', 'load_problem',
           'serialize_problem', 'dumps_problem', 'problem_hash']


class ProblemDefinition(object):
    def __init__(self, problem, n_steps=DEFAULT_N_STEPS, limits=None):
        """
        Contents of problem file.

        :param BvpProblem problem: the problem
        :param int n_steps: grid size
        :param limits: None or dict with keys mode, perturbation, eps_schedule, k_list
        """
        self.problem = problem
        self.n_steps = n_steps
        self.limits = limits


# region Reading

def _field_offsets(text):
    """Offsets in the text of every field path, e.g. 'boundary.terms[1].coeff' -> offset of "coeff" key"""
    decoder = json.JSONDecoder()
    whitespace = ' \t\n\r'
    offsets = {}

    def skip(index):
        while index < len(text) and text[index] in whitespace:
            index += 1
        return index

    def walk(index, path):
        index = skip(index)
        offsets.setdefault(path, index)
        if text[index] == '{':
            index = skip(index + 1)
            while text[index] != '}':
                key_offset = index
                key, index = json.decoder.scanstring(text, index + 1)
                key_path = '{}.{}'.format(path, key) if path else key
                offsets.setdefault(key_path, key_offset)
                index = skip(walk(skip(index) + 1, key_path))
                if text[index] == ',':
                    index = skip(index + 1)
            return index + 1
        if text[index] == '[':
            index = skip(index + 1)
            position = 0
            while text[index] != ']':
                index = skip(walk(index, '{}[{}]'.format(path, position)))
                position += 1
                if text[index] == ',':
                    index = skip(index + 1)
            return index + 1
        return decoder.raw_decode(text, index)[1]

    walk(0, '')
    return offsets


def _locate(text, field):
    """Line of the field, or of its closest present parent"""
    if text is None or field is None:
        return None
    try:
        offsets = _field_offsets(text)
    except (ValueError, IndexError):
        return None
    while field:
        if field in offsets:
            return text.count('\n', 0, offsets[field]) + 1
        field = field[:max(field.rfind('.'), field.rfind('['), 0)]
    return None


class _Reader(object):
    def __init__(self, text):
        self.text = text

    def error(self, message, field):
        return ProblemFileError(message, field=field, line=_locate(self.text, field))

    def get(self, node, key, field, default=KeyError):
        path = '{}.{}'.format(field, key) if field else key
        if not isinstance(node, dict):
            raise self.error('section should be an object', field)
        if key not in node:
            if default is KeyError:
                raise self.error('missing field', path)
            return default
        return node[key]

    def number(self, value, field, integer=False):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise self.error('expected a number, got {!r}'.format(value), field)
        if integer and int(value) != value:
            raise self.error('expected an integer, got {!r}'.format(value), field)
        return int(value) if integer else float(value)

    def complex_number(self, value, field):
        if isinstance(value, list):
            if len(value) != 2:
                raise self.error('complex number should be a pair [re, im]', field)
            return complex(self.number(value[0], field), self.number(value[1], field))
        return complex(self.number(value, field))

    def array(self, value, field, ndim, shape=None):
        """Nested list of complex numbers with given number of dimensions"""
        def convert(item, depth, path):
            if depth == ndim:
                return self.complex_number(item, path)
            if not isinstance(item, list):
                raise self.error('expected a list', path)
            return [convert(element, depth + 1, '{}[{}]'.format(path, i)) for i, element in enumerate(item)]

        converted = convert(value, 0, field)
        try:
            result = numpy.array(converted, dtype=complex)
        except ValueError:
            raise self.error('rows have different lengths', field)
        if result.ndim != ndim:
            raise self.error('expected {}-dimensional array, got shape {}'.format(ndim, result.shape), field)
        if shape is not None and result.shape != tuple(shape):
            raise self.error('expected shape {}, got {}'.format(tuple(shape), result.shape), field)
        return result

    def coefficient(self, node, field, shape):
        kind = self.get(node, 'kind', field)
        value_ndim = len(shape)
        if kind == 'constant':
            return ConstantCoefficient(self.array(self.get(node, 'value', field), field + '.value', value_ndim, shape))
        if kind == 'polynomial':
            coefficients = self.array(self.get(node, 'coefficients', field), field + '.coefficients', value_ndim + 1)
            if coefficients.shape[1:] != tuple(shape) or len(coefficients) == 0:
                raise self.error('expected non-empty list of arrays of shape {}'.format(tuple(shape)),
                                 field + '.coefficients')
            return PolynomialCoefficient(coefficients)
        if kind == 'trigonometric':
            return TrigonometricCoefficient(
                self.array(self.get(node, 'value', field), field + '.value', value_ndim, shape),
                amplitude=self.number(self.get(node, 'amplitude', field, 1.), field + '.amplitude'),
                frequency=self.number(self.get(node, 'frequency', field, 1.), field + '.frequency'),
                phase=self.number(self.get(node, 'phase', field, 0.), field + '.phase'))
        if kind == 'sum':
            terms = self.get(node, 'terms', field)
            if not isinstance(terms, list) or len(terms) == 0:
                raise self.error('expected non-empty list of coefficients', field + '.terms')
            coefficients = [self.coefficient(term, '{}.terms[{}]'.format(field, i), shape)
                            for i, term in enumerate(terms)]
            weights = self.get(node, 'weights', field, None)
            if weights is not None:
                weights = self.array(weights, field + '.weights', 1, (len(coefficients),))
            return CoefficientSum(coefficients, weights=weights)
        raise self.error('unknown coefficient kind {!r}'.format(kind), field + '.kind')

    def term(self, node, field, r, m):
        variant = self.get(node, 'variant', field)
        if variant == 'point':
            return PointDerivative(order=self.number(self.get(node, 'order', field, 0), field + '.order', integer=True),
                                   point=self.number(self.get(node, 'point', field), field + '.point'),
                                   coeff=self.array(self.get(node, 'coeff', field), field + '.coeff', 2, (r, m)))
        if variant == 'integral':
            return IntegralTerm(self.coefficient(self.get(node, 'kernel', field), field + '.kernel', (r, m)))
        if variant == 'fractional':
            return FractionalPointDerivative(
                alpha=self.number(self.get(node, 'alpha', field), field + '.alpha'),
                point=self.number(self.get(node, 'point', field), field + '.point'),
                coeff=self.array(self.get(node, 'coeff', field), field + '.coeff', 2, (r, m)),
                kind=self.get(node, 'kind', field, 'caputo'))
        raise self.error('unknown term variant {!r}'.format(variant), field + '.variant')

    def limits(self, node, problem):
        field = 'limits'
        mode = self.get(node, 'mode', field)
        raw = self.get(node, 'perturbation', field)
        path = field + '.perturbation'
        m, r = problem.m, problem.r
        if mode in ('coefficient', 'oscillation'):
            if isinstance(raw, dict):
                perturbation = self.coefficient(raw, path, (m, m))
            else:
                perturbation = self.array(raw, path, 2, (m, m))
        elif mode == 'boundary':
            if isinstance(raw, list) and len(raw) == len(problem.B.terms) and \
                    any(item is None or isinstance(item, dict) for item in raw):
                perturbation = []
                for i, (term, item) in enumerate(zip(problem.B.terms, raw)):
                    item_path = '{}[{}]'.format(path, i)
                    if item is None:
                        perturbation.append(None)
                    elif isinstance(term, IntegralTerm):
                        perturbation.append(self.coefficient(item, item_path, (r, m)))
                    else:
                        perturbation.append(self.array(item, item_path, 2, (r, m)))
            else:
                perturbation = self.array(raw, path, 2, (r, m))
        elif mode == 'point':
            if isinstance(raw, list):
                perturbation = [None if item is None else self.number(item, '{}[{}]'.format(path, i))
                                for i, item in enumerate(raw)]
            else:
                perturbation = self.number(raw, path)
        else:
            raise self.error('unknown mode {!r}'.format(mode), field + '.mode')
        k_list = self.get(node, 'k_list', field, list(DEFAULT_K_LIST))
        if not isinstance(k_list, list) or len(k_list) == 0:
            raise self.error('expected non-empty list of integers', field + '.k_list')
        k_list = [self.number(k, '{}.k_list[{}]'.format(field, i), integer=True) for i, k in enumerate(k_list)]
        if k_list[0] < 1 or any(k1 >= k2 for k1, k2 in zip(k_list[:-1], k_list[1:])):
            raise self.error('k_list should be strictly increasing positive integers, got {}'.format(k_list),
                             field + '.k_list')

        schedule = self.get(node, 'eps_schedule', field, 'inverse')
        path = field + '.eps_schedule'
        if isinstance(schedule, list):
            schedule = [self.number(value, '{}[{}]'.format(path, i)) for i, value in enumerate(schedule)]
            if len(schedule) != len(k_list):
                raise self.error('expected {} values, one for each k'.format(len(k_list)), path)
            if any(value < 0 for value in schedule) or any(e1 < e2 for e1, e2 in zip(schedule[:-1], schedule[1:])):
                raise self.error('eps should be non-negative and non-increasing, got {}'.format(schedule), path)
        elif schedule not in SCHEDULES:
            raise self.error('unknown schedule {!r}, use one of {} or a list'.format(schedule, SCHEDULES), path)
        return OrderedDict([('mode', mode), ('perturbation', perturbation),
                            ('eps_schedule', schedule), ('k_list', k_list)])

    def family(self, problem, limits):
        """Builds the family once, so that inconsistent limits are reported as file errors"""
        try:
            PerturbationFamily(problem, **limits)
        except (AssertionError, ValueError) as e:
            raise self.error(str(e), 'limits.perturbation')


def parse_problem(document, text=None):
    """
    Builds problem definition from parsed JSON document.

    :param dict document: parsed JSON
    :param str text: source text, used only to report line numbers
    :return: ProblemDefinition
    :raises ProblemFileError: on any malformed or inconsistent field
    """
    reader = _Reader(text)
    interval_node = reader.get(document, 'interval', '')
    a = reader.number(reader.get(interval_node, 'a', 'interval'), 'interval.a')
    b = reader.number(reader.get(interval_node, 'b', 'interval'), 'interval.b')
    try:
        interval = Interval(a, b)
    except ValueError as e:
        raise reader.error(str(e), 'interval')

    system = reader.get(document, 'system', '')
    m = reader.number(reader.get(system, 'm', 'system'), 'system.m', integer=True)
    s = reader.number(reader.get(system, 's', 'system'), 'system.s', integer=True)
    if m < 1 or s < 1:
        raise reader.error('m and s should be positive', 'system')
    A = reader.coefficient(reader.get(system, 'A', 'system'), 'system.A', (m, m))
    f_node = reader.get(system, 'f', 'system', None)
    f = None if f_node is None else reader.coefficient(f_node, 'system.f', (m,))

    boundary = reader.get(document, 'boundary', '')
    r = reader.number(reader.get(boundary, 'r', 'boundary'), 'boundary.r', integer=True)
    if r < 1:
        raise reader.error('r should be positive', 'boundary.r')
    boundary_s = reader.number(reader.get(boundary, 's', 'boundary', s), 'boundary.s', integer=True)
    terms_node = reader.get(boundary, 'terms', 'boundary')
    if not isinstance(terms_node, list) or len(terms_node) == 0:
        raise reader.error('expected non-empty list of terms', 'boundary.terms')
    terms = []
    for i, node in enumerate(terms_node):
        field = 'boundary.terms[{}]'.format(i)
        try:
            terms.append(reader.term(node, field, r, m))
        except ProblemFileError:
            raise
        except (AssertionError, ValueError) as e:
            raise reader.error(str(e), field)

    data = reader.get(document, 'data', '')
    c = reader.array(reader.get(data, 'c', 'data'), 'data.c', 1, (r,))

    n_steps = DEFAULT_N_STEPS
    grid_node = reader.get(document, 'grid', '', None)
    if grid_node is not None:
        n_steps = reader.number(reader.get(grid_node, 'n_steps', 'grid', DEFAULT_N_STEPS), 'grid.n_steps',
                                integer=True)
        if n_steps < 4:
            raise reader.error('n_steps should be at least 4', 'grid.n_steps')

    try:
        B = BoundaryOperator(terms, r=r, m=m, s=boundary_s)
        problem = BvpProblem(interval, m=m, s=s, A=A, f=f, B=B, c=c)
    except (AssertionError, ValueError) as e:
        raise reader.error(str(e), 'boundary')

    limits = None
    limits_node = reader.get(document, 'limits', '', None)
    if limits_node is not None:
        limits = reader.limits(limits_node, problem)
        reader.family(problem, limits)
    return ProblemDefinition(problem, n_steps=n_steps, limits=limits)


def loads_problem(text):
    try:
        document = json.loads(text, object_pairs_hook=OrderedDict)
    except ValueError as e:
        raise ProblemFileError('malformed JSON: {}'.format(e), line=getattr(e, 'lineno', None))
    return parse_problem(document, text=text)


def load_problem(path):
    with open(path) as f:
        return loads_problem(f.read())


# endregion


# region Writing

def _complex_to_json(value):
    value = complex(value)
    return [value.real, value.imag]


def _array_to_json(array):
    array = numpy.asarray(array, dtype=complex)
    if array.ndim == 0:
        return _complex_to_json(array)
    return [_array_to_json(item) for item in array]


def _coefficient_to_json(coefficient):
    if isinstance(coefficient, ConstantCoefficient):
        return OrderedDict([('kind', 'constant'), ('value', _array_to_json(coefficient.value))])
    if isinstance(coefficient, PolynomialCoefficient):
        return OrderedDict([('kind', 'polynomial'), ('coefficients', _array_to_json(coefficient.coefficients))])
    if isinstance(coefficient, TrigonometricCoefficient):
        return OrderedDict([('kind', 'trigonometric'), ('value', _array_to_json(coefficient.value)),
                            ('amplitude', coefficient.amplitude), ('frequency', coefficient.frequency),
                            ('phase', coefficient.phase)])
    if isinstance(coefficient, CoefficientSum):
        return OrderedDict([('kind', 'sum'), ('terms', [_coefficient_to_json(c) for c in coefficient.coefficients]),
                            ('weights', _array_to_json(coefficient.weights))])
    raise ProblemFileError('{} can not be written to problem file'.format(type(coefficient).__name__))


def _term_to_json(term):
    if isinstance(term, PointDerivative):
        return OrderedDict([('variant', 'point'), ('order', term.order), ('point', term.point),
                            ('coeff', _array_to_json(term.coeff))])
    if isinstance(term, IntegralTerm):
        return OrderedDict([('variant', 'integral'), ('kernel', _coefficient_to_json(term.kernel))])
    return OrderedDict([('variant', 'fractional'), ('alpha', term.alpha), ('kind', term.kind),
                        ('point', term.point), ('coeff', _array_to_json(term.coeff))])


def _perturbation_to_json(perturbation):
    if perturbation is None or isinstance(perturbation, numbers.Real):
        return perturbation
    if isinstance(perturbation, AbstractCoefficient):
        return _coefficient_to_json(perturbation)
    if isinstance(perturbation, list):
        return [_perturbation_to_json(item) for item in perturbation]
    return _array_to_json(perturbation)


def serialize_problem(definition):
    """
    :param ProblemDefinition definition: problem with grid and limits settings
    :return: OrderedDict, JSON-compatible document
    """
    problem = definition.problem
    document = OrderedDict()
    document['interval'] = OrderedDict([('a', problem.interval.a), ('b', problem.interval.b)])
    document['system'] = OrderedDict([('m', problem.m), ('s', problem.s),
                                      ('A', _coefficient_to_json(problem.A)),
                                      ('f', _coefficient_to_json(problem.f))])
    document['boundary'] = OrderedDict([('r', problem.r), ('s', problem.B.s),
                                        ('terms', [_term_to_json(term) for term in problem.B.terms])])
    document['data'] = OrderedDict([('c', _array_to_json(problem.c))])
    document['grid'] = OrderedDict([('n_steps', definition.n_steps)])
    if definition.limits is not None:
        limits = definition.limits
        document['limits'] = OrderedDict([('mode', limits['mode']),
                                          ('perturbation', _perturbation_to_json(limits['perturbation'])),
                                          ('eps_schedule', limits['eps_schedule']),
                                          ('k_list', list(limits['k_list']))])
    return document


def dumps_problem(definition):
    return json.dumps(serialize_problem(definition), indent=2)


def problem_hash(definition):
    """sha256 of canonical form of the problem, identifies problem in reports"""
    canonical = json.dumps(serialize_problem(definition), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

# endregion
