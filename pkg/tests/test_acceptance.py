"""Acceptance suite: one test per criterion, with pinned tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Collected estimate checks from the solver-heavy criteria feed
the zero-violation criterion at the end.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from flatcech import cli
from flatcech.classify import (
    BETTI_BLOWUP9,
    Blowup9Spec,
    ToroidalSpec,
    blowup9_profile,
    hodge_sum_consistent,
    surface_h1_dim,
    toroidal_classify,
)
from flatcech.cover import (
    Cochain0,
    build_grid_cover,
    coboundary,
    custom_nerve,
    transitions,
    ueda_bounds,
    ueda_oracle,
)
from flatcech.diophantine import (
    QuadraticIrrational,
    Rational,
    best_approx_error,
    classify_growth,
    golden_conjugate,
    make_az_theta,
    scan_best_approx_error,
)
from flatcech.errors import NoLevelsFound
from flatcech.pic0 import ComplexParam, bundle, distance_to_trivial, power
from flatcech.series import (
    LAURENT,
    TAYLOR,
    FormalCocycle,
    build_laurent_witness,
    build_taylor_witness,
    convergence_check,
    default_az_budget,
    disjoint_support_proxy,
    partial_coboundary_gap,
    radius_verdict,
    solve_formal,
)

GOLDEN = golden_conjugate()
SQRT2M1 = QuadraticIrrational(-1, 1, 1, 2)

# (criterion, M_n, K_upper, max_g) tuples accumulated by criteria 3, 4, 6, 7
ESTIMATE_CHECKS = []


def _ok(line):
    print(f"\nACCEPTANCE {line}")


# ---------------------------------------------------------------------------
# criterion 1: diophantine oracle equivalence, n <= 10^4, < 30 s
# ---------------------------------------------------------------------------

def test_c01_diophantine_oracle_equivalence():
    t0 = time.time()
    tol = Fraction(1, 10**12)
    for name, theta in (("golden", GOLDEN), ("sqrt2-1", SQRT2M1),
                        ("az", make_az_theta())):
        for n in range(1, 10_001):
            e = best_approx_error(theta, n)
            s = scan_best_approx_error(theta, n)
            assert abs(e.mid - s.mid) + e.width + s.width <= tol, (name, n)
    elapsed = time.time() - t0
    assert elapsed < 30.0
    _ok(f"C1: PASS - CF vs integer-scan agreement <= 1e-12 for 3 thetas, "
        f"n <= 10^4 ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# criterion 2: trichotomy on the nine-point blow-up inputs, < 10 s
# ---------------------------------------------------------------------------

def test_c02_trichotomy_blowup_inputs():
    t0 = time.time()
    v = classify_growth(Rational(1, 3))
    assert v.label == "Torsion"
    v = classify_growth(GOLDEN)
    assert (v.label, v.certificate) == ("CaseI", "Structural")
    az = make_az_theta()
    v = classify_growth(az)
    assert (v.label, v.certificate) == ("CaseIII", "Structural")

    p_rat = blowup9_profile(Blowup9Spec(Rational(1, 3)))
    assert p_rat.verdict == "(i)"
    assert "infinite dimension and Hausdorff" in p_rat.statement
    p_ap = blowup9_profile(Blowup9Spec(GOLDEN))
    assert p_ap.verdict == "(ii)" and p_ap.dim_h1_m == 0
    p_az = blowup9_profile(Blowup9Spec(az))
    assert p_az.verdict == "(iii)" and "non-Hausdorff" in p_az.statement
    elapsed = time.time() - t0
    assert elapsed < 10.0
    _ok(f"C2: PASS - Torsion/CaseI/CaseIII labels and the three profile "
        f"verdicts ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# criterion 3: sandwich trend on the 4x4 cover, n = 1..50, < 60 s
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def sandwich_data():
    cov = build_grid_cover(4)
    F = bundle(0, GOLDEN)
    rows = []
    for n in range(1, 51):
        cx = transitions(cov, F, n)
        b = ueda_bounds(cx, seed=0)
        d = float(distance_to_trivial(power(F, n)).mid)
        rows.append((n, d, b.K_lower, b.K_upper))
        ESTIMATE_CHECKS.append(("c3-mode", b.K_lower, b.K_upper, 1.0))
    return rows


def test_c03_sandwich_trend(sandwich_data):
    t0 = time.time()
    d = np.array([r[1] for r in sandwich_data])
    kl = np.array([r[2] for r in sandwich_data])
    ku = np.array([r[3] for r in sandwich_data])
    prod_l, prod_u = kl * d, ku * d
    assert prod_l.max() / prod_l.min() <= 1e3
    assert prod_u.max() / prod_u.min() <= 1e3
    slope = float(np.polyfit(np.log(1.0 / d), np.log(kl), 1)[0])
    assert 0.8 <= slope <= 1.2
    elapsed = time.time() - t0
    assert elapsed < 60.0
    _ok(f"C3: PASS - K*d bands {prod_l.max()/prod_l.min():.2f} / "
        f"{prod_u.max()/prod_u.min():.2f} <= 1e3, slope {slope:.3f} in "
        f"[0.8, 1.2]")


# ---------------------------------------------------------------------------
# criterion 4: formal-solver roundtrip over 100 levels, < 30 s
# ---------------------------------------------------------------------------

def test_c04_formal_roundtrip():
    t0 = time.time()
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    rng = np.random.default_rng(0)
    f0s, levels = {}, {}
    for n in range(1, 101):
        vals = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        vals /= np.max(np.abs(vals))
        f0s[n] = Cochain0(cov, vals)
        levels[n] = coboundary(transitions(cov, N, -n), f0s[n])
    g = FormalCocycle(cov, N, TAYLOR, levels)
    sol = solve_formal(cov, N, g)
    for n in range(1, 101):
        err = np.max(np.abs(sol.levels[n].values - f0s[n].values))
        assert err <= 1e-9 * f0s[n].sup_norm
        ESTIMATE_CHECKS.append(("c4", sol.norms[n], sol.k_upper[n],
                                sol.g_norms[n]))
    verdict = radius_verdict(sol, TAYLOR)
    assert verdict.verdict == "TrivialCandidate"
    elapsed = time.time() - t0
    assert elapsed < 30.0
    _ok(f"C4: PASS - 100-level roundtrip <= 1e-9, radius verdict "
        f"TrivialCandidate ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# criterion 6: Taylor witness and its Case I control
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def taylor_family():
    cov = build_grid_cover(4)
    N = bundle(0, make_az_theta())
    budget = default_az_budget(N.q)  # twice the third schedule denominator
    fam = build_taylor_witness(cov, N, 2.0, 3, budget)
    for n in fam.order:
        w = fam.levels[n]
        b = ueda_bounds(transitions(cov, N, -n))
        ESTIMATE_CHECKS.append(("c6", w.max_f, b.K_upper, w.max_g))
    return fam


def test_c06_taylor_witness(taylor_family):
    fam = taylor_family
    assert len(fam.order) >= 3
    schedule_qs = (1, 3, 82)
    for n in fam.order:
        assert any(n % q == 0 for q in schedule_qs)
        w = fam.levels[n]
        assert w.max_f > 2.0 ** n
    for l1 in range(1, 4):
        for l2 in range(l1 + 1, 4):
            assert disjoint_support_proxy(fam, l1, l2)
    top = max(fam.order)
    gaps = [partial_coboundary_gap(fam, 0.5, Q) for Q in range(0, top + 1)]
    assert all(a >= b - 1e-18 for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] == 0.0 and partial_coboundary_gap(fam, 0.5, top) == 0.0

    with pytest.raises(NoLevelsFound):
        build_taylor_witness(build_grid_cover(4), bundle(0, GOLDEN), 2.0, 3, 50)
    _ok(f"C6: PASS - supports {list(fam.order)} certified above 2^n, "
        "disjointness proxy holds, gap monotone to 0; golden control found "
        "no levels")


# ---------------------------------------------------------------------------
# criterion 7: Laurent witness normalization and convergence annulus
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def laurent_family():
    cov = build_grid_cover(5)
    N = bundle(0, make_az_theta())
    fam = build_laurent_witness(cov, N, None, 3, 82)
    for level in fam.order:
        w = fam.levels[level]
        b = ueda_bounds(transitions(cov, N, -level))
        ESTIMATE_CHECKS.append(("c7", w.max_f, b.K_upper, w.max_g))
    return fam


def test_c07_laurent_witness(laurent_family):
    fam = laurent_family
    assert fam.order  # support levels exist
    for level, R in zip(fam.order, fam.R_schedule):
        n = -level
        w = fam.levels[level]
        assert w.max_f == pytest.approx(2.0 ** -n, rel=1e-12)
        assert w.max_g < 2.0 * (2.0 * R) ** -n
    rep = convergence_check(fam, 0.51, 0.99)
    assert rep.ok
    rep2 = convergence_check(fam, 0.45, 0.99)
    assert not rep2.ok and rep2.divergence_levels
    _ok(f"C7: PASS - |f| = 2^-n exactly at supports {list(fam.order)}, "
        "g-bound 2*(2R)^-n verified, convergent on (0.51, 0.99), divergence "
        "certificate below 0.5")


# ---------------------------------------------------------------------------
# criterion 5: per-level estimate invariant, zero violations
# ---------------------------------------------------------------------------

def test_c05_per_level_estimate(sandwich_data, taylor_family, laurent_family):
    assert ESTIMATE_CHECKS, "criteria 3-7 must populate the check list"
    violations = [c for c in ESTIMATE_CHECKS
                  if not c[1] <= c[2] * c[3] * (1 + 1e-9)]
    assert violations == []
    _ok(f"C5: PASS - M_n <= K_upper * max|g_n| on all "
        f"{len(ESTIMATE_CHECKS)} recorded solves/extremal levels")


# ---------------------------------------------------------------------------
# criterion 8: toy-nerve oracle
# ---------------------------------------------------------------------------

def test_c08_ueda_toy_oracle():
    nerve = custom_nerve(2, [(0, 1, (0, 0)), (0, 1, (0, 1))])
    cx = transitions(nerve, bundle(0, Fraction(1, 2)), 1)
    f = Cochain0(nerve, np.array([1.0, 1.0]))
    g = coboundary(cx, f)
    assert f.sup_norm / g.sup_norm == pytest.approx(0.5)
    b = ueda_bounds(cx, seed=0)
    assert b.K_lower >= 0.5
    oracle = ueda_oracle(cx, 10**6, seed=0)
    assert b.K_lower >= oracle / 2
    assert b.K_lower <= oracle * 2
    _ok(f"C8: PASS - hand ratio 0.5 <= K_lower {b.K_lower:.4f}, within "
        f"factor 2 of the 1e6-sample oracle {oracle:.4f}")


# ---------------------------------------------------------------------------
# criterion 9: dimension formula
# ---------------------------------------------------------------------------

def test_c09_dimension_formula():
    assert surface_h1_dim(12, [0]) == 0
    assert surface_h1_dim(0, [0, 0]) == 1
    _ok("C9: PASS - dim H1 formula gives 0 for (e=12, deg 0) and 1 for "
        "(e=0, deg 0,0)")


# ---------------------------------------------------------------------------
# criterion 10: lookup tables
# ---------------------------------------------------------------------------

def test_c10_lookup_tables():
    prof = blowup9_profile(Blowup9Spec(GOLDEN))
    assert prof.betti == (1, 0, 11)
    assert prof.hodge[(0, 0)] == 1 and prof.hodge[(2, 0)] == 1
    assert prof.hodge[(1, 1)] == 10
    assert hodge_sum_consistent(prof.betti, prof.hodge)
    tau = ComplexParam.make(1j)
    assert toroidal_classify(ToroidalSpec(tau, Rational(0, 1),
                                          GOLDEN))["class"] == "theta"
    assert toroidal_classify(ToroidalSpec(tau, Rational(0, 1),
                                          make_az_theta()))["class"] == "wild"
    _ok("C10: PASS - Betti (1,0,11), Hodge (1,10,1) with the sum identity "
        "for r = 0,1,2; toroidal theta/wild split")


# ---------------------------------------------------------------------------
# criterion 11: CLI determinism
# ---------------------------------------------------------------------------

def test_c11_cli_determinism(tmp_path, capsys):
    bundle_json = json.dumps({
        "p": {"kind": "rational", "num": 0, "den": 1},
        "q": {"kind": "quadratic", "a": -1, "b": 1, "c": 2, "d": 5},
    })
    base = ["ueda", "--grid", "3", "--bundle", bundle_json,
            "--levels", "1..8", "--seed", "0", "--format", "csv"]
    assert cli.dispatch(base + ["--out", str(tmp_path / "a.csv")]) == 0
    assert cli.dispatch(base + ["--out", str(tmp_path / "b.csv")]) == 0
    capsys.readouterr()
    a = (tmp_path / "a.csv").read_bytes()
    b = (tmp_path / "b.csv").read_bytes()
    assert a == b
    wit = ["witness", "--grid", "4",
           "--bundle", json.dumps({"p": 0, "q": {"kind": "az",
                                                 "schedule": "linear",
                                                 "offset": 1}}),
           "--budget", "12", "--seed", "0"]
    assert cli.dispatch(wit + ["--out", str(tmp_path / "w1.json")]) == 0
    assert cli.dispatch(wit + ["--out", str(tmp_path / "w2.json")]) == 0
    capsys.readouterr()
    assert (tmp_path / "w1.json").read_bytes() == (tmp_path / "w2.json").read_bytes()
    _ok("C11: PASS - repeated CLI runs with identical config are "
        "byte-identical")
