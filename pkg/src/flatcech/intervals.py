"""Certified real intervals with exact rational endpoints.

All number-theoretic quantities in this package (orbit distances, transition
angles, singular-value bounds) are carried as closed intervals [lo, hi] whose
endpoints are `fractions.Fraction`s, so enclosure is exact: no rounding mode
juggling, and values as small as 1e-300 keep full relative accuracy.
Endpoints are periodically rounded outward to a dyadic grid to keep
denominators from blowing up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

# Pi to 50 decimal digits (truncated), used for certified sin evaluation.
_PI_LO = Fraction("3.14159265358979323846264338327950288419716939937510")
_PI_HI = _PI_LO + Fraction(1, 10**49)

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RealInterval:
    """Closed interval with Fraction endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: {self.lo} > {self.hi}")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def point(x) -> "RealInterval":
        f = Fraction(x)
        return RealInterval(f, f)

    @staticmethod
    def hull(*items: "RealInterval") -> "RealInterval":
        return RealInterval(min(i.lo for i in items), max(i.hi for i in items))

    # -- basic queries -----------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def surely_gt(self, x) -> bool:
        return self.lo > Fraction(x)

    def surely_lt(self, x) -> bool:
        return self.hi < Fraction(x)

    def is_point(self) -> bool:
        return self.lo == self.hi

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo)

    def __add__(self, other):
        other = _coerce(other)
        return RealInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RealInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def abs(self) -> "RealInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(Fraction(0), max(-self.lo, self.hi))

    def intersect(self, other: "RealInterval") -> "RealInterval":
        return RealInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    # -- rounding / elementary functions ------------------------------------

    def round_out(self, bits: int = 192) -> "RealInterval":
        """Round endpoints outward to denominator 2**bits."""
        scale = 1 << bits
        lo = Fraction(_floor_frac(self.lo * scale), scale)
        hi = Fraction(-_floor_frac(-self.hi * scale), scale)
        return RealInterval(lo, hi)

    def sqrt(self, bits: int = 128) -> "RealInterval":
        if self.lo < 0:
            raise ValueError("sqrt of interval with negative endpoint")
        return RealInterval(_sqrt_lower(self.lo, bits), _sqrt_upper(self.hi, bits))


def _coerce(x) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return RealInterval.point(x)


def _floor_frac(f: Fraction) -> int:
    return f.numerator // f.denominator


def _sqrt_lower(f: Fraction, bits: int) -> Fraction:
    if f == 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    v = (f.numerator * scale) // f.denominator
    return Fraction(isqrt(v), 1 << bits)


def _sqrt_upper(f: Fraction, bits: int) -> Fraction:
    if f == 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    v = -((-f.numerator * scale) // f.denominator)  # ceil
    r = isqrt(v)
    if r * r == v and f.numerator * scale % f.denominator == 0:
        return Fraction(r, 1 << bits)
    return Fraction(r + 1, 1 << bits)


def floor_of(iv: RealInterval) -> int:
    """Certified floor; raises if the interval straddles an integer."""
    lo_f = _floor_frac(iv.lo)
    hi_f = _floor_frac(iv.hi)
    if lo_f != hi_f and not (iv.hi == hi_f):  # allow closed upper endpoint
        raise ValueError("interval straddles an integer; increase precision")
    return lo_f


def frac_part(iv: RealInterval) -> RealInterval:
    """v mod 1 as an interval in [0, 1); requires certified floor."""
    f = floor_of(iv)
    return iv - f


def reduce_half(iv: RealInterval) -> RealInterval:
    """Reduce mod 1 into [-1/2, 1/2] by subtracting the nearest integer."""
    m = _floor_frac(iv.mid + _HALF)
    out = iv - m
    if out.lo < -_HALF - out.width or out.hi > _HALF + out.width:
        raise ValueError("interval too wide for half reduction")
    return out


def dist_to_int(iv: RealInterval) -> RealInterval:
    """Distance of the enclosed value to the nearest integer.

    Requires width < 1/2 so a single nearest integer (up to ties) applies;
    the result is clamped into [0, 1/2], which is valid because the true
    distance always lies there.
    """
    if iv.width >= _HALF:
        return RealInterval(Fraction(0), _HALF)
    d = reduce_half(iv).abs()
    return RealInterval(min(d.lo, _HALF), min(d.hi, _HALF))


def sin_pi(iv: RealInterval, bits: int = 140) -> RealInterval:
    """sin(pi*x) for an interval x contained in [0, 1/2].

    Monotone on this range, so evaluate certified bounds at both endpoints
    with an alternating Taylor series in exact rational arithmetic.
    """
    if iv.lo < 0 or iv.hi > _HALF:
        raise ValueError("sin_pi expects an interval inside [0, 1/2]")
    lo = _sin_pi_point(iv.lo, bits).lo
    hi = _sin_pi_point(iv.hi, bits).hi
    return RealInterval(max(lo, Fraction(0)), min(hi, Fraction(1)))


def _sin_pi_point(t: Fraction, bits: int) -> RealInterval:
    if t == 0:
        return RealInterval.point(0)
    wbits = bits + 48  # working precision above the stop threshold
    x = (RealInterval(_PI_LO, _PI_HI) * t).round_out(wbits)
    x2 = (x * x).round_out(wbits)
    term = x
    total = x
    j = 1
    eps = Fraction(1, 1 << (bits + 8))
    while True:
        term = (term * x2 * Fraction(-1, (2 * j) * (2 * j + 1))).round_out(wbits)
        bound = max(abs(term.lo), abs(term.hi))
        if bound < eps:
            total = total + RealInterval(-bound, bound)
            break
        total = (total + term).round_out(wbits)
        j += 1
        if j > 200:  # unreachable for |x| <= pi/2, defensive
            raise ArithmeticError("sin series did not converge")
    return total
