from fractions import Fraction

import pytest

from asepx.scalar import Poly, RatFunc


def poly(*coeffs) -> Poly:
    """Polynomial from low-degree-first coefficients."""
    return Poly(tuple(Fraction(c) for c in coeffs))


def one_minus_t_pow(e: int) -> Poly:
    """1 - t**e."""
    return Poly((1,) + (0,) * (e - 1) + (-1,))


def rf(num, den=None) -> RatFunc:
    if not isinstance(num, Poly):
        num = poly(num)
    if den is None:
        return RatFunc(num)
    if not isinstance(den, Poly):
        den = poly(den)
    return RatFunc(num, den)


@pytest.fixture
def frac():
    return Fraction
