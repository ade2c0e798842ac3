import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from edsmodel import arith
from edsmodel.curve import INFINITY, Curve, CurveConfig
from edsmodel.errors import ConfigError, IndexOutOfRange, NotOnCurve, TorsionCollision

import oracles

GOLDEN = json.loads((Path(__file__).parent / "data" / "golden.json").read_text())


def test_multiples_match_frozen_table(curve):
    for n, (x, y) in GOLDEN["multiples"].items():
        pt = curve.multiple_point(int(n))
        assert arith.fmt_rational(pt.x) == x and arith.fmt_rational(pt.y) == y


def test_spot_values(curve):
    assert curve.multiple(2).point.x == Fraction(129, 100)
    assert curve.multiple(3).point.x == Fraction(164323, 29241)
    assert curve.den_x(4) == 58675600


def test_division_polynomial_oracle_to_24(curve):
    for n, (x, y) in oracles.multiples(0, -2, 3, 5, 24).items():
        pt = curve.multiple_point(n)
        assert (Fraction(int(pt.x.numerator), int(pt.x.denominator)), Fraction(int(pt.y.numerator), int(pt.y.denominator))) == (x, y)


def test_other_curve_against_oracle():
    c = Curve(CurveConfig(a=0, b=17, gen_x=-2, gen_y=3, n_max=10))
    for n, (x, _) in oracles.multiples(0, 17, -2, 3, 10).items():
        assert c.multiple_point(n).x == x


def test_negative_multiples_and_horizon(curve):
    assert curve.multiple_point(-3) == -curve.multiple_point(3)
    assert curve.multiple_point(0) is INFINITY
    with pytest.raises(IndexOutOfRange):
        curve.multiple(49)
    with pytest.raises(IndexOutOfRange):
        curve.multiple(0)


def test_bad_primes(curve):
    assert curve.bad_primes() == frozenset({2, 3})


def test_config_validation():
    with pytest.raises(ConfigError):
        CurveConfig(a=0, b=0, gen_x=1, gen_y=1)
    with pytest.raises(ConfigError):
        CurveConfig(gen_x=3, gen_y=4)
    with pytest.raises(ConfigError):
        CurveConfig(n_max=10, factor_budget=10)
    with pytest.raises(ConfigError):
        CurveConfig(n_max=0)


def test_torsion_generator_is_caught():
    # (2, 3) has order 6 on y^2 = x^3 + 1
    c = Curve(CurveConfig(a=0, b=1, gen_x=2, gen_y=3, n_max=12))
    c.multiple(5)
    with pytest.raises(TorsionCollision):
        c.multiple(6)
    orders = {(r["x"], r["y"]): r["order"] for r in c.torsion_scan()["candidates"]}
    assert orders[("2", "3")] == 6 and orders[("-1", "0")] == 2


def test_default_curve_has_trivial_torsion(curve):
    assert all(r["order"] is None for r in curve.torsion_scan()["candidates"])


def test_point_validation(curve):
    with pytest.raises(NotOnCurve):
        curve.point(3, 4)
    assert curve.point("129/100", "-383/1000") == curve.multiple_point(2)


@settings(max_examples=60, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_scale_is_additive(curve, m, n):
    P = curve.generator
    assert curve.add(curve.scale(P, m), curve.scale(P, n)) == curve.scale(P, m + n)
    assert curve.scale(P, m) == curve.multiple_point(m)


def _good_part(curve, n):
    d = curve.den_x(n)
    for p in curve.bad_primes():
        d, _ = arith.strip(d, p)
    return d


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30))
def test_strong_divisibility_off_bad_primes(curve, m, n):
    import math

    g = math.gcd(m, n)
    assert math.gcd(_good_part(curve, m), _good_part(curve, n)) == _good_part(curve, g)
