"""
**fredholm_bvp** analyzes and solves general linear boundary-value problems

    y'(t) + A(t) y(t) = f(t),  B y = c

on a finite interval, where B is a sum of point, integral and fractional-derivative terms.
"""
from __future__ import print_function, division, absolute_import

__version__ = '0.1.0'
