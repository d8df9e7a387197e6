import random
from fractions import Fraction

import pytest

from asepx.scalar import (
    PoleError,
    Poly,
    RatFunc,
    poly_gcd,
    random_point,
    ratfunc_eval,
    ratfunc_normalize,
)

from conftest import one_minus_t_pow, poly, rf


class TestNormalize:
    def test_common_factor_cancels(self):
        # (t^2 - 1)/(t - 1) -> (t + 1)/1
        f = ratfunc_normalize(poly(-1, 0, 1), poly(-1, 1))
        assert f == rf(poly(1, 1))

    def test_zero_numerator(self):
        f = ratfunc_normalize(Poly(), poly(3, 7))
        assert f.num == Poly() and f.den == poly(1)

    def test_repeated_factor_long_division(self):
        # (1-t)^2 / ((1-t)(1-t^2)); dividing out gcd (1-t)^2 by hand
        # leaves 1 / (1+t) in monic form.
        num = one_minus_t_pow(1) * one_minus_t_pow(1)
        den = one_minus_t_pow(1) * one_minus_t_pow(2)
        f = ratfunc_normalize(num, den)
        assert f == rf(poly(1), poly(1, 1))

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            ratfunc_normalize(poly(1), Poly())

    def test_monic_denominator_and_reduced(self):
        rng = random.Random(5)
        for _ in range(40):
            a = Poly([rng.randint(-4, 4) for _ in range(rng.randint(1, 5))])
            b = Poly([rng.randint(-4, 4) for _ in range(rng.randint(1, 5))])
            if b.is_zero():
                continue
            f = ratfunc_normalize(a, b)
            assert f.den.leading() in (Fraction(0), Fraction(1))
            if not f.num.is_zero():
                assert poly_gcd(f.num, f.den).degree == 0

    def test_scaling_invariance(self):
        rng = random.Random(11)
        for _ in range(40):
            a = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
            b = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
            c = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
            if b.is_zero() or c.is_zero():
                continue
            assert ratfunc_normalize(a * c, b * c) == ratfunc_normalize(a, b)


class TestEval:
    def test_constant_term(self):
        f = rf(poly(2, 1), poly(1, 0, -1))
        assert ratfunc_eval(f, Fraction(0)) == 2

    def test_geometric_value(self):
        f = rf(poly(1), poly(1, -1))
        assert ratfunc_eval(f, Fraction(1, 2)) == 2

    def test_direct_rational_arithmetic(self):
        # (1-t)^2 (1+t^2) / ((1-t^2)(1-t^3)) at t = 1/3, oracle = plain
        # Fraction arithmetic on the factors.
        t = Fraction(1, 3)
        expected = ((1 - t) ** 2 * (1 + t * t)) / ((1 - t * t) * (1 - t**3))
        f = rf(
            one_minus_t_pow(1) * one_minus_t_pow(1) * poly(1, 0, 1),
            one_minus_t_pow(2) * one_minus_t_pow(3),
        )
        assert ratfunc_eval(f, t) == expected == Fraction(15, 26)

    def test_pole_raises(self):
        f = rf(poly(1), poly(1, -1))
        with pytest.raises(PoleError):
            ratfunc_eval(f, Fraction(1))

    def test_eval_is_ring_homomorphism(self):
        rng = random.Random(23)
        for k in range(30):
            t0 = random_point(400 + k)
            f = _random_ratfunc(rng)
            g = _random_ratfunc(rng)
            try:
                fv, gv = f.eval(t0), g.eval(t0)
                assert (f * g).eval(t0) == fv * gv
                assert (f + g).eval(t0) == fv + gv
            except PoleError:
                continue


def _random_ratfunc(rng) -> RatFunc:
    num = Poly([rng.randint(-6, 6) for _ in range(rng.randint(1, 4))])
    den = Poly([rng.randint(-6, 6) for _ in range(rng.randint(1, 4))])
    if den.is_zero():
        den = poly(1)
    return RatFunc(num, den)


class TestFieldAxioms:
    def test_random_triples(self):
        rng = random.Random(7)
        for _ in range(40):
            a, b, c = (_random_ratfunc(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a - a == RatFunc(Poly())
            if not a.is_zero():
                assert a / a == rf(poly(1))


class TestRandomPoint:
    def test_deterministic(self):
        assert random_point(1) == random_point(1)

    def test_distinct_seeds(self):
        values = {random_point(seed) for seed in range(1, 1001)}
        assert len(values) == 1000

    def test_avoids_degenerate_values(self):
        for seed in range(1, 200):
            v = random_point(seed)
            assert v not in (0, 1, -1)
            assert abs(v.numerator) <= 10**6 and v.denominator <= 10**6

    def test_respects_avoid_set(self):
        first = random_point(42)
        again = random_point(42, avoid={first})
        assert again != first


class TestJson:
    def test_poly_roundtrip(self):
        p = poly(3, Fraction(1, 2), 0, -2)
        data = p.to_json()
        assert data == ["3", "1/2", "0", "-2"]
        assert Poly.from_json(data) == p

    def test_ratfunc_roundtrip(self):
        f = rf(poly(1, -1), poly(1, 0, 0, -1))
        data = f.to_json()
        assert set(data) == {"num", "den"}
        assert RatFunc.from_json(data) == f

    def test_zero_poly_is_empty_array(self):
        assert Poly().to_json() == []
