import math
from fractions import Fraction

import numpy as np
import pytest

from flatcech.diophantine import (
    QuadraticIrrational,
    Rational,
    best_approx_error,
    golden_conjugate,
    make_az_theta,
    scan_best_approx_error,
)
from flatcech.pic0 import (
    ComplexParam,
    EllipticCurve,
    bundle,
    bundle_from_json,
    bundle_to_json,
    case_label,
    distance_to_trivial,
    is_torsion,
    is_trivial,
    power,
)

GOLDEN = golden_conjugate()


def test_power_examples():
    F = bundle(0, GOLDEN)
    F3 = power(F, 3)
    a = best_approx_error(F3.q, 1)
    b = best_approx_error(GOLDEN, 3)
    assert abs(a.mid - b.mid) <= a.width + b.width
    F6 = power(bundle(Fraction(1, 2), Fraction(1, 3)), 6)
    assert is_trivial(F6)


def test_power_composition_identity():
    rng = np.random.default_rng(3)
    for _ in range(12):
        num1, num2 = rng.integers(1, 30, size=2)
        F = bundle(Rational(int(num1), 31), GOLDEN)
        a = power(power(F, 2), 3)
        b = power(F, 6)
        for n in (1, 5, 11):
            ea = best_approx_error(a.q, n).mid
            eb = best_approx_error(b.q, n).mid
            assert abs(ea - eb) < Fraction(1, 10**20)
        assert a.p == b.p


def test_distance_examples():
    assert distance_to_trivial(bundle(Fraction(1, 2), 0)).mid == Fraction(1, 2)
    assert distance_to_trivial(bundle(0, 0)).mid == 0
    F = bundle(0, GOLDEN)
    d8 = distance_to_trivial(power(F, 8))
    e8 = scan_best_approx_error(GOLDEN, 8, full_scan=True)
    assert abs(d8.mid - e8.mid) <= d8.width + e8.width + Fraction(1, 10**12)


def test_is_torsion():
    assert is_torsion(bundle(Fraction(1, 2), Fraction(1, 3))) == (True, 6)
    assert is_torsion(bundle(0, GOLDEN)) == (False, None)
    assert is_torsion(bundle(0, 0)) == (True, 1)


def test_case_labels():
    assert case_label(bundle(0, GOLDEN)).label == "CaseI"
    v = case_label(bundle(Fraction(1, 2), Fraction(1, 3)))
    assert v.label == "Torsion" and v.torsion_order == 6
    assert case_label(bundle(0, make_az_theta())).label == "CaseIII"


def test_distance_symmetry_under_inverse():
    rng = np.random.default_rng(11)
    for _ in range(100):
        num = int(rng.integers(0, 97))
        den = int(rng.integers(1, 97))
        F = bundle(Rational(num, max(den, num + 1)), Rational(int(rng.integers(0, 53)), 53))
        d1 = distance_to_trivial(F)
        d2 = distance_to_trivial(power(F, -1))
        assert abs(d1.mid - d2.mid) <= d1.width + d2.width + Fraction(1, 10**20)


def test_orbit_subadditivity():
    F = bundle(0, GOLDEN)
    d1 = distance_to_trivial(F).hi
    for n in range(1, 101):
        dn = distance_to_trivial(power(F, n)).lo
        assert dn <= n * d1 + Fraction(1, 10**12)


def test_norm_equivalence_window():
    from flatcech.diophantine import orbit_distance
    F = bundle(Rational(3, 7), GOLDEN)
    for n in (1, 2, 9, 33):
        d = distance_to_trivial(power(F, n))
        m = orbit_distance((F.p, F.q), n)
        assert d.hi >= m.lo - Fraction(1, 10**12)
        assert d.lo <= m.hi * Fraction(142, 100) + Fraction(1, 10**12)


def test_nonstandard_tau_hat_distance():
    curve = EllipticCurve(ComplexParam.make(1j),
                          ComplexParam(Fraction(1, 5), Fraction(2)))
    F = bundle(Fraction(1, 2), Fraction(0), curve)
    d = distance_to_trivial(F)
    assert abs(d.mid - Fraction(1, 2)) < Fraction(1, 10**10)


def test_bundle_json_roundtrip():
    F = bundle(Rational(1, 2), GOLDEN)
    obj = bundle_to_json(F)
    assert obj["tau"] == {"re": 0.0, "im": 1.0}
    back = bundle_from_json(obj)
    assert bundle_to_json(back) == obj


def test_lattice_distance_general_path_matches_separable():
    from flatcech.pic0 import _lattice_distance
    curve = EllipticCurve(ComplexParam.make(1j), ComplexParam.make(1j))
    rng = np.random.default_rng(6)
    for _ in range(25):
        F = bundle(Rational(int(rng.integers(0, 53)), 53),
                   Rational(int(rng.integers(0, 53)), 53), curve)
        via_window = _lattice_distance(F, 96)
        direct = distance_to_trivial(F, 96)
        assert abs(via_window.mid - direct.mid) <= \
            via_window.width + direct.width + Fraction(1, 10**20)


def test_ratio_invariance_complex_scaling():
    from flatcech.cover import build_grid_cover, transitions
    cov = build_grid_cover(3)
    cx = transitions(cov, bundle(0, GOLDEN), 1)
    rng = np.random.default_rng(14)
    A = cx.matrix
    for _ in range(100):
        f = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        c = complex(rng.standard_normal(), rng.standard_normal())
        r1 = np.max(np.abs(f)) / np.max(np.abs(A @ f))
        r2 = np.max(np.abs(c * f)) / np.max(np.abs(A @ (c * f)))
        assert r2 == pytest.approx(r1, rel=1e-12)
