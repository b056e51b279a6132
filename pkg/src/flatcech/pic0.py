"""Unitary flat line bundles on an elliptic curve as points of Pic0.

A bundle is a monodromy pair (p, q) of ThetaSpecs taken mod 1; the trivial
bundle is (0, 0).  The degree-zero Picard group is embedded into the complex
plane by point(p, q) = p + q*tau_hat (tau_hat = i by default), and the
distance to the trivial bundle is the Euclidean distance of that point to
the lattice Z + Z*tau_hat.  Case labels for the orbit n -> d(I, F^n) are
inherited from the max-norm orbit classifier: the two norms differ by a
factor of at most sqrt(2), which cannot change an exponential-rate label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .diophantine import (
    GrowthVerdict,
    Rational,
    ThetaSpec,
    best_approx_error,
    classify_growth,
    is_rational_theta,
    theta_from_json,
    theta_mod1,
    theta_scale,
    theta_to_json,
)
from .intervals import RealInterval


@dataclass(frozen=True)
class ComplexParam:
    """Exact complex number with Fraction components."""

    re: Fraction
    im: Fraction

    @staticmethod
    def make(z) -> "ComplexParam":
        if isinstance(z, ComplexParam):
            return z
        if isinstance(z, complex):
            return ComplexParam(Fraction(z.real), Fraction(z.imag))
        return ComplexParam(Fraction(z), Fraction(0))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


I_UNIT = ComplexParam(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class EllipticCurve:
    """Curve C/<1, tau>; tau_hat fixes the Pic0 embedding normalization."""

    tau: ComplexParam = field(default=I_UNIT)
    tau_hat: ComplexParam = field(default=I_UNIT)

    def __post_init__(self):
        object.__setattr__(self, "tau", ComplexParam.make(self.tau))
        object.__setattr__(self, "tau_hat", ComplexParam.make(self.tau_hat))
        if self.tau.im <= 0 or self.tau_hat.im <= 0:
            raise ValueError("periods must have positive imaginary part")


@dataclass(frozen=True)
class FlatLineBundle:
    curve: EllipticCurve
    p: ThetaSpec
    q: ThetaSpec

    def __post_init__(self):
        object.__setattr__(self, "p", theta_mod1(self.p))
        object.__setattr__(self, "q", theta_mod1(self.q))

    @property
    def monodromy(self) -> Tuple[ThetaSpec, ThetaSpec]:
        return (self.p, self.q)


def bundle(p, q, curve: Optional[EllipticCurve] = None) -> FlatLineBundle:
    """Convenience constructor accepting ThetaSpecs or exact numbers."""
    def to_theta(x):
        if isinstance(x, (int, float)):
            f = Fraction(x)
            return Rational(f.numerator, f.denominator)
        if isinstance(x, Fraction):
            return Rational(x.numerator, x.denominator)
        return x
    return FlatLineBundle(curve or EllipticCurve(), to_theta(p), to_theta(q))


def power(F: FlatLineBundle, n: int) -> FlatLineBundle:
    """F^n: monodromy (n*p mod 1, n*q mod 1), tracked exactly."""
    return FlatLineBundle(F.curve, theta_scale(F.p, n), theta_scale(F.q, n))


def is_torsion(F: FlatLineBundle) -> Tuple[bool, Optional[int]]:
    """True with the order when both monodromy components are rational."""
    rp, rq = is_rational_theta(F.p), is_rational_theta(F.q)
    if rp is None or rq is None:
        return (False, None)
    order = (rp.denominator * rq.denominator) // gcd(rp.denominator,
                                                     rq.denominator)
    return (True, order)


def is_trivial(F: FlatLineBundle) -> bool:
    t, order = is_torsion(F)
    return t and order == 1


def distance_to_trivial(F: FlatLineBundle, bits: int = 96) -> RealInterval:
    """Certified d(I, F): distance of p + q*tau_hat to Z + Z*tau_hat."""
    th = F.curve.tau_hat
    ep = best_approx_error_like(F.p, bits)
    eq = best_approx_error_like(F.q, bits)
    if th.re == 0 and th.im == 1:
        # components separate: sqrt(dist(p)^2 + dist(q)^2)
        return (ep * ep + eq * eq).sqrt(bits)
    return _lattice_distance(F, bits)


def best_approx_error_like(theta: ThetaSpec, bits: int) -> RealInterval:
    """dist(theta, Z) as an interval (n = 1 best-approximation error)."""
    return best_approx_error(theta, 1, bits)


def _lattice_distance(F: FlatLineBundle, bits: int) -> RealInterval:
    from .diophantine import scaled_frac

    th = F.curve.tau_hat
    fp = scaled_frac(F.p, 1, bits)
    fq = scaled_frac(F.q, 1, bits)
    # search window: |q - m2| * Im(tau_hat) <= |z| <= 1 + |tau_hat|
    bound = 1 + float(th.re * th.re + th.im * th.im) ** 0.5
    w2 = int(bound / float(th.im)) + 2
    best = None
    for m2 in range(-w2, w2 + 2):
        y = (fq - m2) * th.im
        xbase = fp + (fq - m2) * th.re
        w1 = int(bound) + 2
        for m1 in range(-w1, w1 + 2):
            x = xbase - m1
            d2 = x * x + y * y
            best = d2 if best is None else RealInterval(
                min(best.lo, d2.lo), min(best.hi, d2.hi))
    return best.sqrt(bits)


def case_label(F: FlatLineBundle, horizon: int = 40) -> GrowthVerdict:
    """Growth trichotomy of n -> d(I, F^n).

    Delegates to the max-norm orbit classifier; the Euclidean embedding
    distance is within a factor sqrt(2) of the max norm (for tau_hat = i),
    and exponential-rate labels are invariant under Lipschitz-equivalent
    distances.
    """
    t, order = is_torsion(F)
    if t:
        import math
        from .diophantine import CERT_STRUCTURAL, LABEL_TORSION
        return GrowthVerdict(LABEL_TORSION, math.inf, CERT_STRUCTURAL,
                             horizon, torsion_order=order)
    return classify_growth((F.p, F.q), horizon)


# ---------------------------------------------------------------------------
# JSON form
# ---------------------------------------------------------------------------

def bundle_to_json(F: FlatLineBundle) -> dict:
    return {
        "tau": {"re": float(F.curve.tau.re), "im": float(F.curve.tau.im)},
        "tau_hat": {"re": float(F.curve.tau_hat.re),
                    "im": float(F.curve.tau_hat.im)},
        "p": theta_to_json(F.p),
        "q": theta_to_json(F.q),
    }


def bundle_from_json(obj: dict) -> FlatLineBundle:
    def cplx(d, default_im=1):
        if d is None:
            return ComplexParam(Fraction(0), Fraction(default_im))
        return ComplexParam(Fraction(d.get("re", 0)), Fraction(d.get("im", 1)))

    curve = EllipticCurve(cplx(obj.get("tau")), cplx(obj.get("tau_hat")))
    return FlatLineBundle(curve, theta_from_json(obj["p"]),
                          theta_from_json(obj["q"]))
