import math
from fractions import Fraction

import numpy as np
import pytest

from flatcech.cover import (
    Cochain0,
    Cochain1,
    build_grid_cover,
    coboundary,
    solve_coboundary,
    transitions,
)
from flatcech.diophantine import golden_conjugate, make_az_theta
from flatcech.errors import (
    InsufficientLevels,
    NoLevelsFound,
    NotACocycle,
    TorsionLevel,
)
from flatcech.pic0 import bundle
from flatcech.series import (
    LAURENT,
    TAYLOR,
    FormalCocycle,
    build_laurent_witness,
    build_taylor_witness,
    cocycle_from_text,
    convergence_check,
    default_az_budget,
    disjoint_support_proxy,
    graded_to_text,
    partial_coboundary_gap,
    radius_verdict,
    solve_formal,
    witness_certificate_json,
)

GOLDEN = golden_conjugate()


def random_cocycle(cov, N, levels, seed=7, direction=TAYLOR):
    rng = np.random.default_rng(seed)
    f0s, gs = {}, {}
    for n in levels:
        vals = rng.standard_normal(cov.n_vertices) + \
            1j * rng.standard_normal(cov.n_vertices)
        vals /= np.max(np.abs(vals))
        f0s[n] = Cochain0(cov, vals)
        cx = transitions(cov, N, -n)
        gs[n] = coboundary(cx, f0s[n])
    return f0s, FormalCocycle(cov, N, direction, gs)


# ---------------------------------------------------------------------------
# formal solving
# ---------------------------------------------------------------------------

def test_solve_formal_roundtrip():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    f0s, g = random_cocycle(cov, N, range(1, 31))
    sol = solve_formal(cov, N, g)
    for n in range(1, 31):
        err = np.max(np.abs(sol.levels[n].values - f0s[n].values))
        assert err <= 1e-9 * max(f0s[n].sup_norm, 1)
    assert all(sol.estimate_ok.values())


def test_solve_formal_single_level_matches_solve_coboundary():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    f0s, g = random_cocycle(cov, N, [1])
    sol = solve_formal(cov, N, g)
    cx = transitions(cov, N, -1)
    direct, _ = solve_coboundary(cx, g.levels[1])
    assert np.array_equal(sol.levels[1].values, direct.values)


def test_solve_formal_torsion_bundle():
    cov = build_grid_cover(3)
    N = bundle(Fraction(1, 2), 0)
    gs = {2: Cochain1(cov, np.zeros(36))}
    with pytest.raises(TorsionLevel):
        g = FormalCocycle(cov, N, TAYLOR, gs)
        solve_formal(cov, N, g)


def test_formal_cocycle_validation():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    rng = np.random.default_rng(1)
    bad = Cochain1(cov, rng.standard_normal(36) + 0j)
    with pytest.raises(NotACocycle):
        FormalCocycle(cov, N, TAYLOR, {1: bad})
    with pytest.raises(Exception):
        FormalCocycle(cov, N, TAYLOR, {0: bad})  # no level-0 term


def test_solve_formal_unique_across_repeats():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    _, g = random_cocycle(cov, N, range(1, 6), seed=13)
    s1 = solve_formal(cov, N, g)
    s2 = solve_formal(cov, N, g)
    for n in s1.levels:
        assert np.max(np.abs(s1.levels[n].values - s2.levels[n].values)) < 1e-12


# ---------------------------------------------------------------------------
# radius verdicts
# ---------------------------------------------------------------------------

def test_radius_verdict_geometric_inputs():
    v = radius_verdict({n: 0.9 ** n for n in range(1, 21)}, TAYLOR)
    assert v.verdict == "TrivialCandidate"
    assert v.growth_rate == pytest.approx(0.9, rel=1e-9)
    v2 = radius_verdict({n: 2.0 ** n for n in range(1, 21)}, TAYLOR)
    assert v2.verdict == "NontrivialCertified"
    assert v2.threshold == pytest.approx(2.0, rel=1e-9)
    assert len(v2.certificate_levels) == 20


def test_radius_verdict_laurent():
    v = radius_verdict({-n: 2.0 ** -n for n in range(1, 21)}, LAURENT)
    assert v.verdict == "NotInImageCertified"
    assert v.threshold == pytest.approx(0.5, rel=1e-9)
    v2 = radius_verdict({-n: 0.01 ** n for n in range(1, 21)}, LAURENT)
    assert v2.verdict in ("InImageCandidate", "NotInImageCertified")


def test_radius_verdict_needs_levels():
    with pytest.raises(InsufficientLevels):
        radius_verdict({n: 1.0 for n in range(1, 5)}, TAYLOR)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def az_taylor_family():
    cov = build_grid_cover(4)
    N = bundle(0, make_az_theta())
    return build_taylor_witness(cov, N, 2.0, 3, default_az_budget(N.q))


def test_taylor_witness_supports(az_taylor_family):
    fam = az_taylor_family
    assert len(fam.order) >= 3
    qs = (1, 3, 82)
    for n in fam.order:
        assert any(n % q == 0 for q in qs)
    for n in fam.order:
        w = fam.levels[n]
        assert w.max_f > 2.0 ** n
        assert w.max_g == pytest.approx(1.0, rel=1e-13)


def test_taylor_witness_lambda_distribution(az_taylor_family):
    fam = az_taylor_family
    for lam in (1, 2, 3):
        step = 1 << lam
        assert fam.lambda_supports(lam) == tuple(
            fam.order[i - 1] for i in range(step, len(fam.order) + 1, step))
    assert disjoint_support_proxy(fam, 1, 2)
    assert disjoint_support_proxy(fam, 1, 3)
    assert disjoint_support_proxy(fam, 2, 3)


def test_taylor_witness_golden_control():
    cov = build_grid_cover(4)
    with pytest.raises(NoLevelsFound):
        build_taylor_witness(cov, bundle(0, GOLDEN), 2.0, 3, 50)


def test_gap_monotone_and_exhaustive(az_taylor_family):
    fam = az_taylor_family
    top = max(abs(n) for n in fam.order)
    gaps = [partial_coboundary_gap(fam, 0.5, Q) for Q in range(0, top + 1, 7)]
    assert all(a >= b - 1e-18 for a, b in zip(gaps, gaps[1:]))
    assert partial_coboundary_gap(fam, 0.5, top) == 0.0
    expected = math.fsum(fam.levels[n].max_g * 0.5 ** n for n in fam.order)
    assert partial_coboundary_gap(fam, 0.5, 0) == pytest.approx(expected, rel=1e-12)


def test_combined_cocycle_growth_proxy(az_taylor_family):
    # c1 * (lambda member) + c2 * (higher member): at the lower member's
    # exclusive support levels the formal solution keeps |c1| * R^n / 2
    fam = az_taylor_family
    c1, c2 = 0.7 - 0.2j, 1.5 + 1j
    low = set(fam.lambda_supports(1)) - set(fam.lambda_supports(2))
    for n in low:
        w = fam.levels[n]
        combined = abs(c1) * w.max_f  # higher member vanishes at this level
        assert combined > abs(c1) * 2.0 ** n / 2


@pytest.fixture(scope="module")
def az_laurent_family():
    cov = build_grid_cover(5)
    N = bundle(0, make_az_theta())
    return build_laurent_witness(cov, N, None, 3, 82)


def test_laurent_witness_levels(az_laurent_family):
    fam = az_laurent_family
    assert fam.order == (-1, -3, -82)  # the first three schedule denominators
    for (level, R) in zip(fam.order, fam.R_schedule):
        w = fam.levels[level]
        n = -level
        assert w.max_f == pytest.approx(2.0 ** -n, rel=1e-12)
        assert w.max_g < 2.0 * (2.0 * R) ** -n


def test_laurent_convergence(az_laurent_family):
    fam = az_laurent_family
    rep = convergence_check(fam, 0.51, 0.99)
    assert rep.ok and rep.margin > 0
    rep2 = convergence_check(fam, 0.45, 0.99)
    assert not rep2.ok
    assert rep2.divergence_levels  # equality levels certify divergence
    gaps = [partial_coboundary_gap(fam, 0.75, Q) for Q in (0, 1, 3, 82)]
    assert all(a >= b - 1e-18 for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] == 0.0


def test_convergence_check_synthetic():
    from flatcech.series import FormalSolution
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    sol = FormalSolution(cov, N, TAYLOR, {}, {n: 1.0 for n in range(1, 12)},
                         {}, {}, {}, {})
    assert convergence_check(sol, 0.5, 0.9).ok
    assert not convergence_check(sol, 0.5, 1.2).ok


def test_witness_certificate_json(az_taylor_family):
    cert = witness_certificate_json(az_taylor_family)
    assert cert["direction"] == TAYLOR
    assert cert["support_levels"] == list(az_taylor_family.order)
    assert all(c["pass"] for c in cert["certificates"])


def test_graded_file_roundtrip():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    _, g = random_cocycle(cov, N, range(1, 4), seed=2)
    text = graded_to_text(g, cover_id="grid3")
    back = cocycle_from_text(text, cov)
    for n in g.levels:
        assert np.allclose(back.levels[n].values, g.levels[n].values)


def test_solve_formal_laurent_roundtrip():
    cov = build_grid_cover(3)
    N = bundle(0, GOLDEN)
    rng = np.random.default_rng(17)
    f0s, gs = {}, {}
    for level in range(-10, 0):
        vals = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        vals /= np.max(np.abs(vals))
        f0s[level] = Cochain0(cov, vals)
        cx = transitions(cov, N, -level)  # Laurent level -n twists by +n
        gs[level] = coboundary(cx, f0s[level])
    g = FormalCocycle(cov, N, LAURENT, gs)
    sol = solve_formal(cov, N, g)
    for level in gs:
        err = np.max(np.abs(sol.levels[level].values - f0s[level].values))
        assert err <= 1e-9
    assert all(sol.estimate_ok.values())
