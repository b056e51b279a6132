import math
from fractions import Fraction

import pytest

from flatcech.intervals import (
    RealInterval,
    dist_to_int,
    frac_part,
    reduce_half,
    sin_pi,
)


def test_arithmetic_encloses():
    a = RealInterval(Fraction(1, 3), Fraction(1, 2))
    b = RealInterval(Fraction(-2), Fraction(-1))
    c = a * b + 1
    assert c.lo <= Fraction(1, 3) * Fraction(-1) + 1 <= c.hi
    assert (a - a).contains(0)


def test_reciprocal_and_div():
    a = RealInterval(Fraction(1, 4), Fraction(1, 2))
    r = a.reciprocal()
    assert r.lo == 2 and r.hi == 4
    with pytest.raises(ZeroDivisionError):
        RealInterval(Fraction(-1), Fraction(1)).reciprocal()


def test_sqrt_brackets():
    v = RealInterval.point(Fraction(2)).sqrt(96)
    assert v.lo * v.lo <= 2 <= v.hi * v.hi
    assert float(v.width) < 1e-28


def test_round_out_widens():
    a = RealInterval(Fraction(1, 3), Fraction(1, 3))
    r = a.round_out(64)
    assert r.lo <= a.lo <= a.hi <= r.hi
    assert r.width <= Fraction(2, 1 << 64)


@pytest.mark.parametrize("x", [0.0, 0.1, 0.25, 0.3333, 0.5])
def test_sin_pi_matches_math(x):
    iv = sin_pi(RealInterval.point(Fraction(x)), 120)
    assert iv.lo <= Fraction(math.sin(math.pi * x)) + Fraction(1, 10**15)
    assert iv.hi >= Fraction(math.sin(math.pi * x)) - Fraction(1, 10**15)
    assert float(iv.width) < 1e-30


def test_sin_pi_tiny_argument_relative_accuracy():
    t = Fraction(1, 10**50)
    iv = sin_pi(RealInterval.point(t), 200)
    mid = iv.mid
    expected = t * Fraction(math.pi)
    assert abs(mid - expected) < expected * Fraction(1, 10**10)
    assert iv.lo > 0


def test_dist_to_int():
    v = RealInterval.point(Fraction(27, 10))
    d = dist_to_int(v)
    assert d.lo == d.hi == Fraction(3, 10)
    assert dist_to_int(RealInterval.point(3)).hi == 0


def test_frac_and_reduce():
    v = RealInterval.point(Fraction(-13, 4))
    assert frac_part(v).mid == Fraction(3, 4)
    assert reduce_half(v).mid == Fraction(-1, 4)
