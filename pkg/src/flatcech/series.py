"""Degreewise formal coboundary solving and non-Hausdorff witness families.

A FormalCocycle is a graded family of twisted constant 1-cochains: level
n >= 1 carries the twist by the (-n)-th bundle power (Taylor direction), and
level -n the twist by the n-th power (Laurent direction, principal parts).
The formal solver inverts the coboundary level by level; per-level sup norms
feed Cauchy-Hadamard style radius verdicts, always stated as certificates
over the stored finite tail, never as limits.

Witness families package extremal levels where the achieved coboundary
amplification beats a geometric threshold R^n.  Their defining property -
the cocycle is a limit of coboundaries of truncations while the formal
solution grows too fast to converge - is exactly what makes the ambient
cohomology non-Hausdorff, and partial_coboundary_gap exposes the
finite-truncation surrogate of that statement.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from math import fsum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .cover import (
    Cochain0,
    Cochain1,
    Nerve,
    cocycle_residual,
    extremal_constant_pair,
    solve_coboundary,
    transitions,
    ueda_bounds,
)
from .diophantine import az_schedule_denominators, AZTheta, ScaledTheta
from .errors import (
    IndexMismatch,
    InsufficientLevels,
    NoLevelsFound,
    NotACocycle,
    TorsionLevel,
)
from .pic0 import FlatLineBundle, bundle_from_json, bundle_to_json, is_torsion

TAYLOR = "taylor"
LAURENT = "laurent"


def _twist_exponent(level: int) -> int:
    # Taylor level n solves under the (-n)-th power; Laurent level -n under
    # the (+n)-th: both are -level.
    return -level


def _check_direction(direction: str, levels) -> None:
    if direction == TAYLOR:
        if any(n < 1 for n in levels):
            raise IndexMismatch("Taylor levels start at 1 (no level-0 term)")
    elif direction == LAURENT:
        if any(n > -1 for n in levels):
            raise IndexMismatch("Laurent levels are <= -1")
    else:
        raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class FormalCocycle:
    """Graded twisted 1-cochains {g_n}; validated against its own twists."""

    cover: Nerve
    bundle: FlatLineBundle
    direction: str
    levels: Dict[int, Cochain1]
    residual_tol: float = 1e-8

    def __post_init__(self):
        _check_direction(self.direction, self.levels)
        for n, g in self.levels.items():
            if g.cover != self.cover:
                raise IndexMismatch(f"level {n} indexed against another cover")
            cx = transitions(self.cover, self.bundle, _twist_exponent(n))
            res = cocycle_residual(cx, g)
            if res > self.residual_tol * max(g.sup_norm, 1e-300):
                raise NotACocycle(
                    f"level {n} fails the twisted cocycle identity "
                    f"(residual {res:.3g})")

    def sup_norms(self) -> Dict[int, float]:
        return {n: g.sup_norm for n, g in self.levels.items()}


@dataclass(frozen=True)
class FormalSolution:
    """Levelwise solutions f_n with norms, residuals and estimate checks."""

    cover: Nerve
    bundle: FlatLineBundle
    direction: str
    levels: Dict[int, Cochain0]
    norms: Dict[int, float]              # M_n = max_j |f_{j,n}|
    residuals: Dict[int, float]
    k_upper: Dict[int, float]            # certified upper bound per twist
    g_norms: Dict[int, float]
    estimate_ok: Dict[int, bool]         # M_n <= K_upper * max|g_n|

    def growth_statistic(self) -> float:
        """limsup-style estimate of M_n^(1/|n|) over the stored tail."""
        if not self.norms:
            return 0.0
        items = sorted(self.norms.items(), key=lambda t: abs(t[0]))
        tail = items[len(items) // 2:]
        return max((m ** (1.0 / abs(n)) if m > 0 else 0.0) for n, m in tail)


def solve_formal(cover: Nerve, N: FlatLineBundle, g: FormalCocycle) -> FormalSolution:
    """Solve -f_j + s f_k = g_jk level by level under the matching twist.

    Uniqueness at every non-torsion level makes the outcome independent of
    solver incidentals; each level records the estimate invariant
    M_n <= K_upper(twist) * max|g_n|.
    """
    tor, _ = is_torsion(N)
    if tor:
        offending = min(abs(n) for n in g.levels) if g.levels else 1
        raise TorsionLevel(
            f"bundle is torsion; level {offending} twist has nontrivial kernel")
    sols: Dict[int, Cochain0] = {}
    norms, residuals, kys, gns, oks = {}, {}, {}, {}, {}
    for n in sorted(g.levels, key=abs):
        cx = transitions(cover, N, _twist_exponent(n))
        f, report = solve_coboundary(cx, g.levels[n])
        b = ueda_bounds(cx)
        sols[n] = f
        norms[n] = f.sup_norm
        residuals[n] = report["post_residual"]
        kys[n] = b.K_upper
        gns[n] = g.levels[n].sup_norm
        oks[n] = f.sup_norm <= b.K_upper * g.levels[n].sup_norm * (1 + 1e-9)
    return FormalSolution(cover, N, g.direction, sols, norms, residuals,
                          kys, gns, oks)


# ---------------------------------------------------------------------------
# radius verdicts
# ---------------------------------------------------------------------------

VERDICT_TRIVIAL = "TrivialCandidate"
VERDICT_NONTRIVIAL = "NontrivialCertified"
VERDICT_IN_IMAGE = "InImageCandidate"
VERDICT_NOT_IN_IMAGE = "NotInImageCertified"
VERDICT_INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class RadiusVerdict:
    verdict: str
    growth_rate: float           # limsup estimate of M_n^(1/n) over the tail
    radius_estimate: float       # Cauchy-Hadamard reciprocal
    threshold: Optional[float]   # R (Taylor) or rho_0 (Laurent) if certified
    certificate_levels: Tuple[int, ...] = ()


def _norm_items(obj) -> List[Tuple[int, float]]:
    if isinstance(obj, FormalSolution):
        return sorted(obj.norms.items(), key=lambda t: abs(t[0]))
    if isinstance(obj, dict):
        return sorted(obj.items(), key=lambda t: abs(t[0]))
    raise TypeError("expected a FormalSolution or a {level: norm} map")


def radius_verdict(sol, direction: str, R: Optional[float] = None,
                   min_hits: int = 3, tol: float = 1e-6) -> RadiusVerdict:
    """Certified convergence verdict from the stored per-level norms.

    Divergence certificates are finite data (a list of levels beating a
    stated geometric threshold); convergence can only ever be a candidate
    verdict, which the naming makes explicit.
    """
    items = _norm_items(sol)
    if len(items) < 10:
        raise InsufficientLevels("radius verdicts need at least 10 levels")
    roots = [(n, m ** (1.0 / abs(n)) if m > 0 else 0.0) for n, m in items]
    tail = roots[len(roots) // 2:]
    growth = max(r for _, r in tail)
    radius = math.inf if growth == 0 else 1.0 / growth
    if direction == TAYLOR:
        if R is None:
            R = _auto_threshold(roots, min_hits)
        if R is not None and R > 1 + tol:
            hits = tuple(n for n, m in items if m >= R ** abs(n) * (1 - 1e-12))
            if len(hits) >= min_hits:
                return RadiusVerdict(VERDICT_NONTRIVIAL, growth, radius, R, hits)
        if growth <= 1 + tol:  # running max of M_n^(1/n) over the tail
            return RadiusVerdict(VERDICT_TRIVIAL, growth, radius, None)
        return RadiusVerdict(VERDICT_INDETERMINATE, growth, radius, None)
    if direction == LAURENT:
        if R is None:
            R = _auto_threshold(roots, min_hits)
        if R is not None and R > tol:
            hits = tuple(n for n, m in items if m >= R ** abs(n) * (1 - 1e-12))
            if len(hits) >= min_hits:
                return RadiusVerdict(VERDICT_NOT_IN_IMAGE, growth, radius, R, hits)
        if growth <= 0.1:
            return RadiusVerdict(VERDICT_IN_IMAGE, growth, radius, None)
        return RadiusVerdict(VERDICT_INDETERMINATE, growth, radius, None)
    raise ValueError(f"unknown direction {direction!r}")


def _auto_threshold(roots, min_hits: int) -> Optional[float]:
    vals = sorted((r for _, r in roots), reverse=True)
    if len(vals) < min_hits:
        return None
    return vals[min_hits - 1]


# ---------------------------------------------------------------------------
# witness families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessLevel:
    level: int                 # signed: n (Taylor) or -n (Laurent)
    f: Cochain0
    g: Cochain1
    max_f: float
    max_g: float
    threshold: float           # R**n (Taylor) or R_nu**n (Laurent)
    ratio: float               # certified achieved ratio at this level
    R: float                   # threshold base in force at selection time


@dataclass(frozen=True)
class WitnessFamily:
    """Extremal levels with certificates, distributed over lambda members.

    Member lambda owns the support levels whose 1-based selection index is
    a multiple of 2**lambda (index positions in 2^lambda * Z_{>0}).
    """

    cover: Nerve
    bundle: FlatLineBundle
    direction: str
    levels: Dict[int, WitnessLevel]
    order: Tuple[int, ...]          # selection order of signed levels
    lambda_max: int
    R: Optional[float] = None                 # Taylor threshold base
    R_schedule: Tuple[float, ...] = ()        # Laurent thresholds per index
    coefficient_bound_ratio: Optional[float] = None  # Laurent: |f_{-n}| <= rho^n

    def lambda_supports(self, lam: int) -> Tuple[int, ...]:
        step = 1 << lam
        return tuple(self.order[i - 1] for i in range(step, len(self.order) + 1, step))

    def support_indices(self, lam: int) -> Tuple[int, ...]:
        step = 1 << lam
        return tuple(range(step, len(self.order) + 1, step))

    def certificates(self) -> List[dict]:
        out = []
        for lam in range(1, self.lambda_max + 1):
            for n in self.lambda_supports(lam):
                w = self.levels[n]
                out.append({
                    "lambda": lam,
                    "level": n,
                    "max_f": w.max_f,
                    "threshold": w.threshold,
                    "pass": bool(w.ratio > w.threshold),
                })
        return out


def disjoint_support_proxy(fam: WitnessFamily, lam1: int, lam2: int) -> bool:
    """Finite independence proxy for two family members.

    After deleting selection indices divisible by 2**(min(lam1,lam2)+1),
    the remaining index sets of the two members are disjoint (the lower
    member keeps its exclusive dyadic class, the higher member loses
    everything).
    """
    if lam1 == lam2:
        return False
    cut = 1 << (min(lam1, lam2) + 1)
    s1 = {i for i in fam.support_indices(lam1) if i % cut}
    s2 = {i for i in fam.support_indices(lam2) if i % cut}
    return not (s1 & s2)


def default_az_budget(theta, schedule_levels: int = 3) -> int:
    """Desk-scale level budget: twice the last schedule denominator."""
    base = theta.base if isinstance(theta, ScaledTheta) else theta
    if not isinstance(base, AZTheta):
        raise TypeError("budget rule applies to constructed AZ thetas")
    return 2 * az_schedule_denominators(base, schedule_levels)[-1]


def _scan_level(cover, N, exponent: int):
    """(f, g, certified ratio) for the extremal constant cochain at a twist."""
    cx = transitions(cover, N, exponent)
    return extremal_constant_pair(cx)


def build_taylor_witness(cover: Nerve, N: FlatLineBundle, R: float,
                         lambda_max: int, level_budget: int) -> WitnessFamily:
    """Scan levels for achieved ratios above R^n and package the witnesses.

    At each kept level the extremal pair is normalized to max|g| = 1, so the
    certificate max_j |f_{j,n}| > R^n is the achieved ratio itself: strictly
    stronger than the (1/2) * K_const bound the selection mimics, because an
    achieved ratio lower-bounds the Ueda constant.
    """
    if R <= 1:
        raise ValueError("Taylor witnesses need R > 1")
    tor, _ = is_torsion(N)
    if tor:
        raise TorsionLevel("witness scan needs a non-torsion bundle")
    chosen: Dict[int, WitnessLevel] = {}
    order: List[int] = []
    for n in range(1, level_budget + 1):
        threshold = R ** n
        f, g, ratio = _scan_level(cover, N, -n)
        if not ratio > threshold:
            continue
        scale = 1.0 / g.sup_norm
        fn = Cochain0(cover, f.values * scale)
        gn = Cochain1(cover, g.values * scale)
        chosen[n] = WitnessLevel(n, fn, gn, fn.sup_norm, gn.sup_norm,
                                 threshold, ratio, R)
        order.append(n)
    if not chosen:
        raise NoLevelsFound(
            f"no level up to {level_budget} beats R^n (expected for "
            "asymptotically positive bundles)")
    return WitnessFamily(cover, N, TAYLOR, chosen, tuple(order), lambda_max, R=R)


def build_laurent_witness(cover: Nerve, N: FlatLineBundle,
                          schedule: Union[Sequence[float], None],
                          lambda_max: int, level_budget: int) -> WitnessFamily:
    """Greedy Laurent witness: the nu-th kept level must beat R_nu^n.

    Kept levels are rescaled so max_j |f_{j,-n}| = 2^{-n} exactly; the
    coboundary then satisfies max|g_{-n}| < 2 * (2 R_nu)^{-n}, and the
    family tail is geometric with ratio 1/2: convergent on 1/2 < |w| < 1,
    divergent at radius 1/2 (the equality levels are the certificate).
    """
    tor, _ = is_torsion(N)
    if tor:
        raise TorsionLevel("witness scan needs a non-torsion bundle")

    def R_of(nu: int) -> Optional[float]:
        if schedule is None:
            return float(nu + 1)
        if nu > len(schedule):
            return None  # schedule exhausted
        return float(schedule[nu - 1])

    chosen: Dict[int, WitnessLevel] = {}
    order: List[int] = []
    r_used: List[float] = []
    nu = 1
    for n in range(1, level_budget + 1):
        R = R_of(nu)
        if R is None:
            break
        threshold = R ** n
        f, g, ratio = _scan_level(cover, N, n)
        if not ratio > threshold:
            continue
        scale = (0.5 ** n) / f.sup_norm
        fn = Cochain0(cover, f.values * scale)
        gn = Cochain1(cover, g.values * scale)
        bound = 2.0 * (2.0 * R) ** (-n)
        if not gn.sup_norm < bound:  # guaranteed by ratio > R^n; checked anyway
            continue
        chosen[-n] = WitnessLevel(-n, fn, gn, fn.sup_norm, gn.sup_norm,
                                  threshold, ratio, R)
        order.append(-n)
        r_used.append(R)
        nu += 1
    if not chosen:
        raise NoLevelsFound(f"no level up to {level_budget} beats its R_nu^n")
    return WitnessFamily(cover, N, LAURENT, chosen, tuple(order), lambda_max,
                         R_schedule=tuple(r_used), coefficient_bound_ratio=0.5)


# ---------------------------------------------------------------------------
# convergence checks and truncation gaps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    ok: bool
    margin: float
    bound_ratio: float
    divergence_levels: Tuple[int, ...] = ()


def _coefficient_bound(obj) -> Tuple[float, Dict[int, float]]:
    if isinstance(obj, WitnessFamily):
        norms = {n: w.max_f for n, w in obj.levels.items()}
        rho = obj.coefficient_bound_ratio
        if rho is None:
            rho = max((m ** (1.0 / abs(n)) for n, m in norms.items()), default=0.0)
        return rho, norms
    if isinstance(obj, FormalSolution):
        norms = obj.norms
        rho = max((m ** (1.0 / abs(n)) for n, m in norms.items() if m > 0),
                  default=0.0)
        return rho, norms
    raise TypeError("expected a WitnessFamily or FormalSolution")


def convergence_check(obj, r_in: float, r_out: float) -> ConvergenceReport:
    """Certified summability of sum M_n r^n on the annulus [r_in, r_out].

    Taylor data needs the geometric coefficient bound rho to satisfy
    rho * r_out < 1; Laurent data needs r_in > rho.  The divergence
    certificate lists the stored levels achieving the bound with equality.
    """
    if not (0 < r_in < r_out):
        raise ValueError("need 0 < r_in < r_out")
    rho, norms = _coefficient_bound(obj)
    if not norms:
        raise InsufficientLevels("no stored levels")
    direction = (LAURENT if min(norms) < 0 else TAYLOR)
    if direction == TAYLOR:
        margin = 1.0 - rho * r_out
        ok = margin > 0
        eq = ()
    else:
        margin = r_in - rho
        ok = margin > 0
        eq = tuple(n for n, m in sorted(norms.items(), reverse=True)
                   if abs(m - rho ** abs(n)) <= 1e-12 * rho ** abs(n))
    return ConvergenceReport(ok, margin, rho, eq)


def partial_coboundary_gap(fam: WitnessFamily, r: float, Q: int) -> float:
    """Sup-norm tail of g - delta(Q-truncated f) weighted at radius r.

    Equals sum over stored levels beyond Q of max|g at level| * r^level
    (levels are signed, so Laurent terms weigh r^{-n}); monotonically
    nonincreasing in Q and zero once Q passes every support level.
    """
    if fam.direction == TAYLOR:
        if not (0 < r < 1):
            raise ValueError("Taylor gap needs 0 < r < 1")
    else:
        if not (0.5 < r < 1):
            raise ValueError("Laurent gap needs 1/2 < r < 1")
    if Q < 0:
        raise ValueError("Q must be >= 0")
    terms = [w.max_g * r ** w.level
             for n, w in sorted(fam.levels.items(), key=lambda t: abs(t[0]))
             if abs(n) > Q]
    return fsum(terms)


# ---------------------------------------------------------------------------
# serialization: JSON header + CSV body; witness certificates
# ---------------------------------------------------------------------------

def graded_to_text(obj: Union[FormalCocycle, FormalSolution],
                   cover_id: str = "") -> str:
    kind = "cocycle" if isinstance(obj, FormalCocycle) else "solution"
    header = {
        "kind": kind,
        "cover": cover_id,
        "direction": obj.direction,
        "bundle": bundle_to_json(obj.bundle),
        "levels": sorted(obj.levels),
    }
    parts = [json.dumps(header, sort_keys=False)]
    body = io.StringIO()
    body.write("level,id,re,im\n")
    for n in sorted(obj.levels):
        vals = obj.levels[n].values
        for i, v in enumerate(vals):
            body.write(f"{n},{i},{float(v.real)!r},{float(v.imag)!r}\n")
    parts.append(body.getvalue())
    return "\n".join(parts)


def cocycle_from_text(text: str, cover: Nerve) -> FormalCocycle:
    head, _, body = text.partition("\n")
    header = json.loads(head)
    if header.get("kind") != "cocycle":
        raise ValueError("not a formal cocycle file")
    bundle = bundle_from_json(header["bundle"])
    rows: Dict[int, Dict[int, complex]] = {}
    lines = body.strip().splitlines()
    for line in lines[1:]:
        n_s, i_s, re_s, im_s = line.split(",")
        rows.setdefault(int(n_s), {})[int(i_s)] = complex(float(re_s), float(im_s))
    levels = {}
    for n, vals in rows.items():
        arr = np.zeros(cover.n_edges, dtype=np.complex128)
        for i, v in vals.items():
            arr[i] = v
        levels[n] = Cochain1(cover, arr)
    return FormalCocycle(cover, bundle, header["direction"], levels)


def witness_certificate_json(fam: WitnessFamily) -> dict:
    return {
        "direction": fam.direction,
        "R": fam.R,
        "R_schedule": list(fam.R_schedule),
        "lambda_max": fam.lambda_max,
        "support_levels": list(fam.order),
        "certificates": fam.certificates(),
    }
