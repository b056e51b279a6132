"""Exact continued-fraction machinery for orbit growth classification.

A ThetaSpec is an exactly-representable real number: a rational, a quadratic
irrational (a + b*sqrt(d))/c, a continued-fraction stream, a constructed
asymptotically-zero number, or a midpoint/radius float interval.  The module
computes certified enclosures of the best-approximation errors
e_n = min_m |n*theta - m|, decides the growth trichotomy for the orbit
n*theta mod 1 (and for two-component orbits under the max norm), and builds
asymptotically-zero numbers from a divergence schedule.

Everything here is a pure function of immutable values; caches attached to
theta objects are idempotent fills, so concurrent use is safe.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Optional, Sequence, Union

from .errors import (
    InsufficientHorizon,
    NotDefined,
    PrecisionExhausted,
    ScheduleInvalid,
)
from .intervals import RealInterval, dist_to_int, frac_part

# Largest partial quotient we will materialize, in bits.  The default
# asymptotically-zero schedule needs 164 bits at depth 4; the next level
# would need ~1e51 bits and is refused.
MAX_PQ_BITS = 200_000

_HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# exact quadratic field arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadVal:
    """Exact value (a + b*sqrt(d))/c with c > 0 and d a fixed non-square."""

    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def make(a: int, b: int, c: int, d: int) -> "QuadVal":
        if c == 0:
            raise ZeroDivisionError("quadratic value with zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        return QuadVal(a, b, c, d)

    def __add__(self, r) -> "QuadVal":
        if isinstance(r, QuadVal):
            raise TypeError("only rational shifts are supported")
        r = Fraction(r)
        return QuadVal.make(self.a * r.denominator + r.numerator * self.c,
                            self.b * r.denominator, self.c * r.denominator, self.d)

    def __sub__(self, r):
        return self + (-Fraction(r))

    def scale(self, r) -> "QuadVal":
        r = Fraction(r)
        return QuadVal.make(self.a * r.numerator, self.b * r.numerator,
                            self.c * r.denominator, self.d)

    def __neg__(self):
        return QuadVal(-self.a, -self.b, self.c, self.d)

    def inverse(self) -> "QuadVal":
        # 1/((a+b*sqrt(d))/c) = c*(a-b*sqrt(d))/(a^2-b^2 d)
        den = self.a * self.a - self.b * self.b * self.d
        if den == 0:
            raise ZeroDivisionError("inverse of zero quadratic value")
        return QuadVal.make(self.c * self.a, -self.c * self.b, den, self.d)

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * self.d
        if a > 0:
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)

    def cmp_rational(self, r) -> int:
        r = Fraction(r)
        diff = QuadVal.make(self.a * r.denominator - r.numerator * self.c,
                            self.b * r.denominator, self.c * r.denominator, self.d)
        return diff.sign()

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("irrational quadratic value")
        return Fraction(self.a, self.c)

    def floor(self) -> int:
        # initial guess from an isqrt bound, then exact verification
        s = isqrt(self.b * self.b * self.d)
        lo = (self.a + (s if self.b >= 0 else -(s + 1)))
        z = lo // self.c
        while self.cmp_rational(z + 1) >= 0:
            z += 1
        while self.cmp_rational(z) < 0:
            z -= 1
        return z

    def to_interval(self, bits: int = 128) -> RealInterval:
        scale = 1 << bits
        s = isqrt(self.d * scale * scale)
        root = RealInterval(Fraction(s, scale), Fraction(s + 1, scale))
        return (root * Fraction(self.b, self.c) + Fraction(self.a, self.c)).round_out(bits)


# ---------------------------------------------------------------------------
# theta specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rational:
    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        g = gcd(abs(self.num), self.den)
        if g > 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)


@dataclass(frozen=True)
class QuadraticIrrational:
    """(a + b*sqrt(d))/c with d a non-square positive integer and b != 0."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b = 0 is rational; use Rational")
        if self.d <= 0 or isqrt(self.d) ** 2 == self.d:
            raise ValueError("d must be a positive non-square")
        if self.c == 0:
            raise ValueError("c must be nonzero")

    def quad(self) -> QuadVal:
        return QuadVal.make(self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class CFStream:
    """Continued fraction [a0; rule(1), rule(2), ...] with rule(k) >= 1."""

    rule: Callable[[int], int]
    a0: int = 0
    name: Optional[str] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class AZTheta:
    """Asymptotically-zero number built from a divergence schedule.

    Partial quotients follow a_{k+1} = ceil(B_k ** q_k) for k >= 1 with
    a_1 = 1, a_0 = 0, which forces e_{q_k} < B_k ** (-q_k).
    """

    schedule_name: str = "linear"
    offset: int = 1
    custom: Optional[Callable[[int], Union[int, Fraction]]] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def bound(self, k: int) -> Fraction:
        if self.custom is not None:
            return Fraction(self.custom(k))
        return Fraction(k + self.offset)


@dataclass(frozen=True)
class FloatIntervalTheta:
    mid: Fraction
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive and finite")

    def interval(self) -> RealInterval:
        return RealInterval(self.mid - self.radius, self.mid + self.radius)


@dataclass(frozen=True)
class ScaledTheta:
    """Integer multiple of a stream-defined irrational, reduced on demand."""

    base: Union[CFStream, AZTheta, FloatIntervalTheta]
    factor: int

    def __post_init__(self):
        if self.factor == 0:
            raise ValueError("zero factor collapses to a rational")


ThetaSpec = Union[Rational, QuadraticIrrational, CFStream, AZTheta,
                  FloatIntervalTheta, ScaledTheta]


def golden_conjugate() -> QuadraticIrrational:
    """(sqrt(5)-1)/2, the all-ones continued fraction."""
    return QuadraticIrrational(-1, 1, 2, 5)


# ---------------------------------------------------------------------------
# continued-fraction engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Convergent:
    index: int
    partial_quotient: int
    p: int
    q: int
    beta: RealInterval  # certified |q*theta - p|


def _cache_of(theta) -> dict:
    cache = getattr(theta, "_cache", None)
    if cache is None:
        raise TypeError(f"no CF cache on {type(theta).__name__}")
    return cache


def _cf_state(theta):
    """Return (quotients, p, q) lists cached on the theta, seeded with a_0."""
    cache = _cache_of(theta)
    if "cf" not in cache:
        a0 = theta.a0 if isinstance(theta, CFStream) else 0
        cache["cf"] = ([a0], [a0], [1])
    return cache["cf"]


def _next_quotient(theta, k: int, q_prev: int) -> int:
    if isinstance(theta, CFStream):
        a = int(theta.rule(k))
        if a < 1:
            raise ValueError(f"partial quotient a_{k} = {a} < 1")
        if a.bit_length() > MAX_PQ_BITS:
            raise PrecisionExhausted(
                f"partial quotient a_{k} needs {a.bit_length()} bits")
        return a
    if isinstance(theta, AZTheta):
        if k == 1:
            return 1
        b = theta.bound(k - 1)
        if b < 2:
            raise ScheduleInvalid(f"schedule bound B_{k-1} = {b} < 2")
        bits_needed = q_prev * math.log2(float(b))
        if bits_needed > MAX_PQ_BITS:
            raise PrecisionExhausted(
                f"partial quotient a_{k} needs ~{bits_needed:.3g} bits")
        return _ceil_pow(b, q_prev)
    raise TypeError(f"no quotient rule for {type(theta).__name__}")


def _ceil_pow(b: Fraction, e: int) -> int:
    num, den = b.numerator ** e, b.denominator ** e
    return -((-num) // den)


_CF_LOCK = threading.Lock()  # guards the list-based quotient caches


def _extend_cf(theta, k: int) -> None:
    """Materialize partial quotients up to index k (inclusive)."""
    with _CF_LOCK:
        quotients, ps, qs = _cf_state(theta)
        while len(quotients) <= k:
            j = len(quotients)
            a = _next_quotient(theta, j, qs[-1])
            quotients.append(a)
            p_prev2 = ps[-2] if len(ps) >= 2 else 1
            q_prev2 = qs[-2] if len(qs) >= 2 else 0
            ps.append(a * ps[-1] + p_prev2)
            qs.append(a * qs[-1] + q_prev2)


def _rational_cf(r: Fraction) -> list[int]:
    """Canonical finite expansion (last quotient >= 2 unless length 1)."""
    out = []
    num, den = r.numerator, r.denominator
    while den:
        a, rem = divmod(num, den)
        out.append(a)
        num, den = den, rem
    if len(out) > 1 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


def _quadratic_cf(theta: QuadraticIrrational, count: int) -> list[int]:
    x = theta.quad()
    out = []
    for _ in range(count + 1):
        a = x.floor()
        out.append(a)
        x = (x - Fraction(a)).inverse()
    return out


def _interval_cf(iv: RealInterval, count: int) -> list[int]:
    out = []
    x = iv
    for _ in range(count + 1):
        lo_f = x.lo.numerator // x.lo.denominator
        hi_f = x.hi.numerator // x.hi.denominator
        if lo_f != hi_f:
            raise PrecisionExhausted(
                "interval too wide to certify the next partial quotient")
        out.append(lo_f)
        frac = x - lo_f
        if frac.lo <= 0:
            raise PrecisionExhausted(
                "interval too wide to certify the next partial quotient")
        x = frac.reciprocal()
    return out


def cf_quotients(theta: ThetaSpec, count: int) -> list[int]:
    """Partial quotients [a_0, ..., a_count]; NotDefined past a rational end."""
    if isinstance(theta, Rational):
        full = _rational_cf(theta.value)
        if count >= len(full):
            raise NotDefined(
                f"rational expansion has {len(full) - 1} partial quotients")
        return full[:count + 1]
    if isinstance(theta, QuadraticIrrational):
        return _quadratic_cf(theta, count)
    if isinstance(theta, (CFStream, AZTheta)):
        _extend_cf(theta, count)
        return list(_cf_state(theta)[0][:count + 1])
    if isinstance(theta, FloatIntervalTheta):
        return _interval_cf(theta.interval(), count)
    if isinstance(theta, ScaledTheta):
        # derived number: certify quotients from a high-precision enclosure
        for bits in (192, 512, 1024):
            enc = theta_enclosure(theta, Fraction(1, 1 << bits))
            try:
                return _interval_cf(enc, count)
            except PrecisionExhausted:
                continue
        raise PrecisionExhausted("cannot certify quotients of scaled theta")
    raise TypeError(f"unsupported theta {type(theta).__name__}")


def _pq_lists(theta, k: int):
    """(p, q) convergent lists up to index k for exact variants."""
    if isinstance(theta, (CFStream, AZTheta)):
        _extend_cf(theta, k)
        _, ps, qs = _cf_state(theta)
        return ps[:k + 1], qs[:k + 1]
    quotients = cf_quotients(theta, k)
    ps, qs = [], []
    for a in quotients:
        p_prev2 = ps[-2] if len(ps) >= 2 else 1
        q_prev2 = qs[-2] if len(qs) >= 2 else 0
        ps.append(a * ps[-1] + p_prev2 if ps else a)
        qs.append(a * qs[-1] + q_prev2 if qs else 1)
    return ps, qs


def _az_pq_log2_lower(theta: AZTheta, k: int, q_prev: int) -> float:
    """log2 lower bound for a_k without materializing it."""
    b = theta.bound(k - 1)
    return q_prev * math.log2(float(b))


def _beta_interval(theta, k: int, ps, qs) -> RealInterval:
    """Certified |q_k*theta - p_k| from the next partial quotient."""
    q_k, q_km1 = qs[k], (qs[k - 1] if k >= 1 else 0)
    try:
        a_next = cf_quotients(theta, k + 1)[k + 1]
        q_next = a_next * q_k + q_km1
        return RealInterval(Fraction(1, q_next + q_k), Fraction(1, q_next))
    except NotDefined:
        # rational: beta exact
        v = theta.value
        return RealInterval.point(abs(q_k * v - ps[k]))
    except PrecisionExhausted:
        if isinstance(theta, AZTheta):
            log2_a = _az_pq_log2_lower(theta, k + 1, q_k)
            a_lb = 1 << min(int(log2_a), 4096)
            return RealInterval(Fraction(0), Fraction(1, a_lb * q_k + q_km1))
        raise


def cf_convergents(theta: ThetaSpec, count: int) -> list[Convergent]:
    """First `count` convergents p_k/q_k (k = 1..count) with certified errors."""
    if count < 1:
        raise ValueError("count must be >= 1")
    quotients = cf_quotients(theta, count)
    ps, qs = _pq_lists(theta, count) if not isinstance(theta, Rational) else (None, None)
    if ps is None:
        ps, qs = [], []
        p2, q2, p1, q1 = 1, 0, quotients[0], 1
        ps.append(p1), qs.append(q1)
        for a in quotients[1:]:
            p1, p2 = a * p1 + p2, p1
            q1, q2 = a * q1 + q2, q1
            ps.append(p1), qs.append(q1)
    out = []
    for k in range(1, count + 1):
        out.append(Convergent(k, quotients[k], ps[k], qs[k],
                              _beta_interval(theta, k, ps, qs)))
    return out


# ---------------------------------------------------------------------------
# certified enclosures and best-approximation errors
# ---------------------------------------------------------------------------

def theta_enclosure(theta: ThetaSpec, max_width: Fraction) -> RealInterval:
    """Certified interval containing theta, of width <= max_width."""
    if isinstance(theta, Rational):
        return RealInterval.point(theta.value)
    if isinstance(theta, QuadraticIrrational):
        bits = max(16, 2 - (max_width.numerator.bit_length()
                            - max_width.denominator.bit_length()))
        iv = theta.quad().to_interval(bits + 4)
        while iv.width > max_width:
            bits *= 2
            iv = theta.quad().to_interval(bits)
        return iv
    if isinstance(theta, FloatIntervalTheta):
        iv = theta.interval()
        if iv.width > max_width:
            raise PrecisionExhausted(
                f"interval theta has width {float(iv.width):.3g} > requested")
        return iv
    if isinstance(theta, ScaledTheta):
        base = theta_enclosure(theta.base, max_width / abs(theta.factor))
        return base * theta.factor
    if isinstance(theta, (CFStream, AZTheta)):
        return _cf_enclosure(theta, max_width)
    raise TypeError(f"unsupported theta {type(theta).__name__}")


def _cf_enclosure(theta, max_width: Fraction) -> RealInterval:
    cache = _cache_of(theta)
    best = cache.get("enclosure")
    if best is not None and best.width <= max_width:
        return best
    k = 1
    while True:
        try:
            _extend_cf(theta, k + 1)
        except PrecisionExhausted:
            if isinstance(theta, AZTheta):
                iv = _az_tail_enclosure(theta, k)
                if iv.width <= max_width:
                    cache["enclosure"] = iv
                    return iv
            raise
        _, ps, qs = _cf_state(theta)
        lo, hi = Fraction(ps[k], qs[k]), Fraction(ps[k + 1], qs[k + 1])
        iv = RealInterval(min(lo, hi), max(lo, hi))
        if iv.width <= max_width:
            cache["enclosure"] = iv
            return iv
        k += 1


def _az_tail_enclosure(theta: AZTheta, k: int) -> RealInterval:
    """Enclosure after the last materializable quotient, from the schedule.

    theta lies strictly between p_k/q_k and p_k/q_k + (-1)^k/(q_k^2 * a_lb)
    where a_lb is a (capped) lower bound on the unmaterializable a_{k+1}.
    """
    _, ps, qs = _cf_state(theta)
    k = min(k, len(qs) - 1)
    log2_a = _az_pq_log2_lower(theta, k + 1, qs[k])
    a_lb = 1 << min(int(log2_a), 4096)
    center = Fraction(ps[k], qs[k])
    err = Fraction(1, a_lb * qs[k] * qs[k])
    if k % 2 == 0:
        return RealInterval(center, center + err)
    return RealInterval(center - err, center)


def _default_bits(n: int) -> int:
    return 64 + 2 * n.bit_length()


def scaled_value(theta: ThetaSpec, n: int, bits: Optional[int] = None) -> RealInterval:
    """Certified enclosure of n*theta."""
    bits = bits or _default_bits(abs(n) or 1)
    if isinstance(theta, Rational):
        return RealInterval.point(n * theta.value)
    if isinstance(theta, QuadraticIrrational):
        return theta.quad().scale(n).to_interval(bits)
    if isinstance(theta, ScaledTheta):
        return scaled_value(theta.base, n * theta.factor, bits)
    width = Fraction(1, 1 << bits)
    if n == 0:
        return RealInterval.point(0)
    return theta_enclosure(theta, width / abs(n)) * n


def best_approx_error(theta: ThetaSpec, n: int,
                      bits: Optional[int] = None) -> RealInterval:
    """Certified enclosure of e_n = min over integers m of |n*theta - m|."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bits = bits or _default_bits(n)
    if isinstance(theta, Rational):
        r = (n * theta.num) % theta.den
        return RealInterval.point(min(Fraction(r, theta.den),
                                      Fraction(theta.den - r, theta.den)))
    if isinstance(theta, QuadraticIrrational):
        v = theta.quad().scale(n)
        f = v.floor()
        r = v - Fraction(f)           # in [0, 1)
        if r.cmp_rational(_HALF) <= 0:
            e = r
        else:
            e = -(r - Fraction(1))
        return e.to_interval(bits).intersect(RealInterval(Fraction(0), _HALF))
    if isinstance(theta, ScaledTheta):
        return best_approx_error(theta.base, n * abs(theta.factor), bits)
    v = scaled_value(theta, n, bits)
    e = dist_to_int(v)
    if e.width > _HALF:
        raise PrecisionExhausted("cannot certify distance to nearest integer")
    return e


def scaled_frac(theta: ThetaSpec, n: int, bits: Optional[int] = None) -> RealInterval:
    """Certified enclosure of n*theta mod 1, inside [0, 1)."""
    bits = bits or _default_bits(abs(n) or 1)
    if isinstance(theta, Rational):
        return RealInterval.point(Fraction((n * theta.num) % theta.den, theta.den))
    if isinstance(theta, QuadraticIrrational):
        v = theta.quad().scale(n)
        f = v.floor()
        return (v - Fraction(f)).to_interval(bits)
    v = scaled_value(theta, n, bits)
    for extra in (0, 64, 256):
        try:
            return frac_part(v)
        except ValueError:
            v = scaled_value(theta, n, bits + 2 * (extra + 64))
    raise PrecisionExhausted("fractional part straddles an integer")


def scaled_mod(theta: ThetaSpec, n: int, m: int,
               bits: Optional[int] = None) -> RealInterval:
    """Certified enclosure of n*theta mod m, inside [0, m)."""
    if isinstance(theta, Rational):
        num = (n * theta.num) % (m * theta.den)
        return RealInterval.point(Fraction(num, theta.den))
    if isinstance(theta, QuadraticIrrational):
        v = theta.quad().scale(n)
        f = v.floor()
        return (v - Fraction(f)).to_interval(bits or _default_bits(abs(n) or 1)) + (f % m)
    bits = bits or _default_bits(abs(n) or 1)
    v = scaled_value(theta, n, bits)
    from .intervals import floor_of
    for extra in (64, 256):
        try:
            f = floor_of(v)
            return (v - f) + (f % m)
        except ValueError:
            v = scaled_value(theta, n, bits + 2 * extra)
    raise PrecisionExhausted("mod-m reduction straddles an integer")


def orbit_distance(pair, n: int, bits: Optional[int] = None) -> RealInterval:
    """max-norm distance of n*(p, q) to the integer lattice."""
    p, q = pair
    ep = best_approx_error(p, n, bits)
    eq = best_approx_error(q, n, bits)
    return RealInterval(max(ep.lo, eq.lo), max(ep.hi, eq.hi))


# ---------------------------------------------------------------------------
# independent oracle: direct integer scan
# ---------------------------------------------------------------------------

def scan_best_approx_error(theta: ThetaSpec, n: int, bits: int = 192,
                           full_scan: bool = False) -> RealInterval:
    """e_n by direct integer scan over candidate multiples m.

    Works on a dyadic approximation A/2^bits of theta obtained from a single
    certified enclosure, then minimizes |n*A - m*2^bits| over integers m by
    exact integer arithmetic (over the full range 0..n when full_scan is
    set, otherwise over the two bracketing candidates, which provably attain
    the minimum).  Independent of the convergent-recurrence evaluation path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    enc = theta_enclosure(theta, Fraction(1, 1 << bits))
    B = 1 << bits
    A = (enc.mid.numerator * B) // enc.mid.denominator
    err = enc.width + Fraction(2, B)
    c = n * A
    if full_scan:
        best = min(abs(c - m * B) for m in range(min(0, c // B), n + 2))
    else:
        m0 = c // B
        best = min(abs(c - m0 * B), abs(c - (m0 + 1) * B))
    e_hat = Fraction(best, B)
    slack = n * err
    return RealInterval(max(Fraction(0), e_hat - slack),
                        min(e_hat + slack, _HALF))


# ---------------------------------------------------------------------------
# growth classification
# ---------------------------------------------------------------------------

LABEL_TORSION = "Torsion"
LABEL_CASE1 = "CaseI"
LABEL_CASE2 = "CaseII"
LABEL_CASE3 = "CaseIII"

CERT_STRUCTURAL = "Structural"
CERT_EMPIRICAL = "Empirical"


@dataclass(frozen=True)
class GrowthVerdict:
    label: str
    exponent: float          # observed sup of (1/n) log(1/e_n) over the horizon
    certificate: str         # Structural or Empirical
    horizon: int
    torsion_order: Optional[int] = None


def _big_log(x: int) -> float:
    if x.bit_length() <= 900:
        return math.log(x)
    s = x.bit_length() - 64
    return math.log(x >> s) + s * math.log(2)


def _log_q_ratios(theta, horizon: int) -> list[float]:
    """L_k = log(q_{k+1}) / q_k for as many k <= horizon as materializable."""
    out = []
    if isinstance(theta, AZTheta):
        for k in range(1, horizon + 1):
            try:
                _extend_cf(theta, k + 1)
                _, _, qs = _cf_state(theta)
                log_q_next = _big_log(qs[k + 1])
                q_k = qs[k]
            except PrecisionExhausted:
                _, _, qs = _cf_state(theta)
                if k >= len(qs):
                    break
                q_k = qs[k]
                log_q_next = (_az_pq_log2_lower(theta, k + 1, q_k) * math.log(2)
                              + _big_log(q_k))
                out.append(log_q_next / float(q_k))
                break
            out.append(log_q_next / float(q_k))
        return out
    count = horizon + 1
    quotients = None
    while count >= 4:
        try:
            quotients = cf_quotients(theta, count)
            break
        except PrecisionExhausted:
            count -= max(1, count // 4)
    if quotients is None:
        raise PrecisionExhausted(
            "too few certifiable partial quotients to classify (interval too "
            "wide, or quotients beyond the materialization limit)")
    qs = [1]  # q_0
    q_prev2 = 0
    for a in quotients[1:]:
        qs.append(a * qs[-1] + q_prev2)
        q_prev2 = qs[-2]
    for k in range(1, len(qs) - 1):
        out.append(_big_log(qs[k + 1]) / float(qs[k]))
    return out


def _label_from_ratios(ratios: Sequence[float]) -> str:
    """Empirical trichotomy from the prefix statistic L_k = log(q_{k+1})/q_k.

    sup -> 0 reads as Case I, a bounded band as Case II, growth as Case III.
    Thresholds are heuristics; callers always see the Empirical flag.
    """
    if len(ratios) < 3:
        raise InsufficientHorizon("need at least 3 prefix statistics")
    third = max(1, len(ratios) // 3)
    head, tail = ratios[:third], ratios[-third:]
    if max(tail) < 0.1:
        return LABEL_CASE1
    if max(tail) > 2.0 * max(head) and max(tail) > 1.0:
        return LABEL_CASE3
    return LABEL_CASE2


def _exponent_from_ratios(ratios: Sequence[float]) -> float:
    return max(ratios) if ratios else 0.0


def _is_rational_like(theta) -> bool:
    return isinstance(theta, Rational)


def _structural_class(theta) -> Optional[str]:
    """Certificate-grade label from the generator class, if available."""
    if isinstance(theta, Rational):
        return LABEL_TORSION
    if isinstance(theta, QuadraticIrrational):
        return LABEL_CASE1
    if isinstance(theta, AZTheta):
        return LABEL_CASE3
    if isinstance(theta, ScaledTheta):
        base = _structural_class(theta.base)
        if base in (LABEL_CASE1, LABEL_CASE3):
            return base
    return None


def _orbit_ratios(source, horizon: int) -> list[float]:
    """Record-based statistic log(1/e at record)/record for orbit data."""
    records = []
    best = None
    for n in range(1, horizon + 1):
        e = (orbit_distance(source, n) if isinstance(source, tuple)
             else best_approx_error(source, n))
        hi = float(e.hi) if e.hi > 0 else float(e.lo)
        if hi == 0.0:
            continue
        if best is None or hi < best:
            best = hi
            records.append(math.log(1.0 / hi) / n)
    return records


def classify_growth(source, horizon: int = 40) -> GrowthVerdict:
    """Trichotomy verdict for a single theta or a (p, q) pair.

    Structural certificates come from the generator class (rational,
    quadratic irrational, schedule-constructed); everything else is
    classified from a finite prefix and flagged Empirical.
    """
    if horizon < 3:
        raise InsufficientHorizon("horizon must be >= 3")
    if isinstance(source, tuple):
        return _classify_pair(source, horizon)
    theta = source
    label = _structural_class(theta)
    if label == LABEL_TORSION:
        return GrowthVerdict(LABEL_TORSION, math.inf, CERT_STRUCTURAL,
                             horizon, torsion_order=theta.den)
    if label is not None:
        base = theta.base if isinstance(theta, ScaledTheta) else theta
        try:
            ratios = _log_q_ratios(base, min(horizon, 24))
            exponent = _exponent_from_ratios(ratios)
        except (PrecisionExhausted, InsufficientHorizon):
            exponent = 0.0
        return GrowthVerdict(label, exponent, CERT_STRUCTURAL, horizon)
    if isinstance(theta, (CFStream, FloatIntervalTheta)):
        try:
            ratios = _log_q_ratios(theta, horizon)
        except NotDefined:  # pragma: no cover - streams are irrational
            raise
        label = _label_from_ratios(ratios)
        return GrowthVerdict(label, _exponent_from_ratios(ratios),
                             CERT_EMPIRICAL, horizon)
    if isinstance(theta, ScaledTheta):
        ratios = _orbit_ratios(theta, horizon)
        if len(ratios) < 3:
            raise InsufficientHorizon("too few orbit records")
        return GrowthVerdict(_label_from_ratios(ratios),
                             _exponent_from_ratios(ratios),
                             CERT_EMPIRICAL, horizon)
    raise TypeError(f"unsupported source {type(theta).__name__}")


def _classify_pair(pair, horizon: int) -> GrowthVerdict:
    p, q = pair
    cp, cq = _structural_class(p), _structural_class(q)
    if cp == LABEL_TORSION and cq == LABEL_TORSION:
        order = (p.den * q.den) // gcd(p.den, q.den)
        return GrowthVerdict(LABEL_TORSION, math.inf, CERT_STRUCTURAL,
                             horizon, torsion_order=order)
    # the max norm is controlled by the slower-shrinking component
    if LABEL_CASE1 in (cp, cq):
        return GrowthVerdict(LABEL_CASE1, _pair_exponent(pair, horizon),
                             CERT_STRUCTURAL, horizon)
    if {cp, cq} == {LABEL_TORSION, LABEL_CASE3}:
        return GrowthVerdict(LABEL_CASE3, _pair_exponent(pair, horizon),
                             CERT_STRUCTURAL, horizon)
    if cp == LABEL_CASE3 and cq == LABEL_CASE3 and _same_stream(p, q):
        return GrowthVerdict(LABEL_CASE3, _pair_exponent(pair, horizon),
                             CERT_STRUCTURAL, horizon)
    ratios = _orbit_ratios(pair, horizon)
    if len(ratios) < 3:
        raise InsufficientHorizon("too few orbit records")
    return GrowthVerdict(_label_from_ratios(ratios),
                         _exponent_from_ratios(ratios), CERT_EMPIRICAL, horizon)


def _same_stream(p, q) -> bool:
    bp = p.base if isinstance(p, ScaledTheta) else p
    bq = q.base if isinstance(q, ScaledTheta) else q
    return bp is bq or bp == bq


def _pair_exponent(pair, horizon: int) -> float:
    ratios = _orbit_ratios(pair, min(horizon, 64))
    return _exponent_from_ratios(ratios)


# ---------------------------------------------------------------------------
# asymptotically-zero construction
# ---------------------------------------------------------------------------

def make_az_theta(schedule: Optional[Callable[[int], Union[int, Fraction]]] = None,
                  offset: int = 1) -> AZTheta:
    """Build an asymptotically-zero theta from a divergence schedule.

    The schedule k -> B_k must satisfy B_k >= 2, be nondecreasing and
    unbounded; partial quotients follow a_{k+1} = ceil(B_k ** q_k), which
    forces e_{q_k} <= 1/(a_{k+1} q_k) < B_k ** (-q_k).  The default is the
    linear schedule B_k = k + 1.
    """
    if schedule is None:
        if offset < 1:
            raise ScheduleInvalid("linear schedule offset must be >= 1")
        return AZTheta("linear", offset)
    probe = [Fraction(schedule(k)) for k in range(1, 49)]
    if any(b < 2 for b in probe):
        raise ScheduleInvalid("schedule values must be >= 2")
    if any(b2 < b1 for b1, b2 in zip(probe, probe[1:])):
        raise ScheduleInvalid("schedule must be nondecreasing")
    if probe[-1] == probe[0]:
        raise ScheduleInvalid("schedule must be unbounded (probe saw a constant)")
    return AZTheta("custom", 0, custom=schedule)


def az_schedule_denominators(theta: AZTheta, count: int = 3) -> list[int]:
    """q_1, ..., q_count for the constructed theta (desk-scale budget anchors)."""
    _extend_cf(theta, count)
    _, _, qs = _cf_state(theta)
    return qs[1:count + 1]


# ---------------------------------------------------------------------------
# scaling and canonical reduction
# ---------------------------------------------------------------------------

def theta_scale(theta: ThetaSpec, k: int) -> ThetaSpec:
    """Exact k*theta mod 1 as a ThetaSpec (symbolic for stream variants)."""
    if k == 0:
        return Rational(0, 1)
    if isinstance(theta, Rational):
        return Rational((k * theta.num) % theta.den, theta.den)
    if isinstance(theta, QuadraticIrrational):
        v = theta.quad().scale(k)
        f = v.floor()
        w = v - Fraction(f)
        return QuadraticIrrational(w.a, w.b, w.c, w.d)
    if isinstance(theta, ScaledTheta):
        f = k * theta.factor
        return theta.base if f == 1 else ScaledTheta(theta.base, f)
    if isinstance(theta, FloatIntervalTheta):
        mid = (theta.mid * k) % 1
        return FloatIntervalTheta(mid, theta.radius * abs(k))
    return theta if k == 1 else ScaledTheta(theta, k)


def theta_mod1(theta: ThetaSpec) -> ThetaSpec:
    """Canonical representative with value in [0, 1)."""
    if isinstance(theta, Rational):
        return Rational(theta.num % theta.den, theta.den)
    if isinstance(theta, QuadraticIrrational):
        v = theta.quad()
        f = v.floor()
        w = v - Fraction(f)
        return QuadraticIrrational(w.a, w.b, w.c, w.d)
    if isinstance(theta, CFStream):
        return CFStream(theta.rule, 0, theta.name) if theta.a0 else theta
    if isinstance(theta, FloatIntervalTheta):
        shift = theta.mid.numerator // theta.mid.denominator
        return FloatIntervalTheta(theta.mid - shift, theta.radius)
    return theta  # AZTheta already in (0,1); ScaledTheta reduced on demand


def is_rational_theta(theta: ThetaSpec) -> Optional[Fraction]:
    """The exact rational value, or None for irrational variants."""
    if isinstance(theta, Rational):
        return theta.value
    return None


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

_CF_RULES = {
    "ones": lambda k: 1,
}


def theta_to_json(theta: ThetaSpec) -> dict:
    if isinstance(theta, Rational):
        return {"kind": "rational", "num": theta.num, "den": theta.den}
    if isinstance(theta, QuadraticIrrational):
        return {"kind": "quadratic", "a": theta.a, "b": theta.b,
                "c": theta.c, "d": theta.d}
    if isinstance(theta, AZTheta):
        if theta.schedule_name != "linear":
            raise NotDefined("custom schedules have no JSON form")
        return {"kind": "az", "schedule": "linear", "offset": theta.offset}
    if isinstance(theta, CFStream):
        if theta.name not in _CF_RULES:
            raise NotDefined("only named CF rules have a JSON form")
        return {"kind": "cf", "rule": theta.name, "a0": theta.a0}
    if isinstance(theta, FloatIntervalTheta):
        return {"kind": "interval", "mid": str(theta.mid),
                "radius": str(theta.radius)}
    if isinstance(theta, ScaledTheta):
        return {"kind": "scaled", "factor": theta.factor,
                "base": theta_to_json(theta.base)}
    raise TypeError(f"unsupported theta {type(theta).__name__}")


def theta_from_json(obj) -> ThetaSpec:
    if isinstance(obj, int):
        return Rational(obj, 1)
    if isinstance(obj, float):
        f = Fraction(obj)
        return Rational(f.numerator, f.denominator)
    kind = obj["kind"]
    if kind == "rational":
        return Rational(obj["num"], obj["den"])
    if kind == "quadratic":
        return QuadraticIrrational(obj["a"], obj["b"], obj["c"], obj["d"])
    if kind == "az":
        return make_az_theta(offset=obj.get("offset", 1))
    if kind == "cf":
        rule = obj["rule"]
        if rule not in _CF_RULES:
            raise NotDefined(f"unknown CF rule {rule!r}")
        return CFStream(_CF_RULES[rule], obj.get("a0", 0), rule)
    if kind == "interval":
        return FloatIntervalTheta(Fraction(str(obj["mid"])),
                                  Fraction(str(obj["radius"])))
    if kind == "scaled":
        base = theta_from_json(obj["base"])
        return ScaledTheta(base, obj["factor"])
    raise NotDefined(f"unknown theta kind {kind!r}")
