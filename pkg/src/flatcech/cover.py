"""Finite good covers of the torus, twisted coboundary maps, Ueda bounds.

A GridCover is the nerve of m x m translated open squares on R^2/Z^2 (with
8-neighbor overlaps), each edge carrying the deck translation that relates
the chosen lifts.  A unitary flat bundle twists the complex of constant
cochains through transition constants s_jk = exp(2*pi*i <deck, n*(p,q)>);
because these come from a group homomorphism the cocycle identity is exact.

For grid covers the twisted coboundary operator is diagonalized exactly: a
vertexwise gauge exp(2*pi*i (n*(p,q)) . pos/m) turns it into a translation
invariant operator, whose Fourier modes xi in (Z/m)^2 give every singular
value in closed form,

    sigma(xi)^2 = 4 * sum over displacement classes delta of
                  sin(pi * ((n*p+xi_1)*delta_1 + (n*q+xi_2)*delta_2)/m)^2.

This yields certified smallest singular values (hence Ueda upper bounds)
even at levels where n*(p,q) is within 1e-50 of the lattice and floating
point SVD is meaningless, and the extremal Fourier mode provides an
achieved sup-norm ratio that lower-bounds the Ueda constant.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .diophantine import is_rational_theta, scaled_frac, scaled_mod, theta_scale
from .errors import (
    IndexMismatch,
    NotACocycle,
    PrecisionExhausted,
    TooCoarse,
    TorsionLevel,
)
from .intervals import RealInterval, dist_to_int, reduce_half, sin_pi
from .pic0 import FlatLineBundle

# displacement classes of the 8-neighborhood, one per unordered edge class
_DELTAS = ((1, 0), (0, 1), (1, 1), (1, -1))

_TWO_PI = 2.0 * math.pi


class Edge(NamedTuple):
    j: int
    k: int
    deck: tuple  # (l1, l2) integer translation relating the lifts
    delta: Optional[tuple] = None  # displacement class (grid covers only)


@dataclass(frozen=True)
class Nerve:
    """Combinatorial nerve: vertices, decked edges, triangles."""

    n_vertices: int
    edges: tuple
    triangles: tuple
    lifts: Optional[tuple] = None
    grid_m: Optional[int] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def oriented(self):
        """Lookup (x, y) -> (edge index, +1 stored / -1 reversed)."""
        if "oriented" not in self._cache:
            table = {}
            for idx, e in enumerate(self.edges):
                table[(e.j, e.k)] = (idx, 1)
                table.setdefault((e.k, e.j), (idx, -1))
            self._cache["oriented"] = table
        return self._cache["oriented"]

    def deck_of(self, x: int, y: int) -> tuple:
        idx, sign = self.oriented()[(x, y)]
        l1, l2 = self.edges[idx].deck
        return (sign * l1, sign * l2)


def build_grid_cover(m: int) -> Nerve:
    """Good cover of the torus by m^2 translated open squares, m >= 3."""
    if m < 3:
        raise TooCoarse("grid covers need m >= 3 for connected overlaps")
    vid = lambda a, b: (a % m) * m + (b % m)
    edges = []
    for a in range(m):
        for b in range(m):
            for d1, d2 in _DELTAS:
                na, nb = a + d1, b + d2
                l1 = (na - na % m) // m
                l2 = (nb - nb % m) // m
                edges.append(Edge(vid(a, b), vid(na, nb), (l1, l2), (d1, d2)))
    triangles = set()
    for x in range(m):
        for y in range(m):
            corner = [vid(x - 1, y - 1), vid(x, y - 1), vid(x - 1, y), vid(x, y)]
            for drop in range(4):
                tri = tuple(sorted(v for i, v in enumerate(corner) if i != drop))
                triangles.add(tri)
    nerve = Nerve(m * m, tuple(edges), tuple(sorted(triangles)),
                  lifts=tuple((a, b) for a in range(m) for b in range(m)),
                  grid_m=m)
    _validate_nerve(nerve)
    return nerve


def custom_nerve(n_vertices: int, edges: Sequence, triangles: Sequence = ()) -> Nerve:
    """Arbitrary connected multigraph nerve with integer deck labels.

    Admitted so hand-checkable toy examples exist; triangles may only join
    vertex pairs related by a unique edge.
    """
    parsed = tuple(Edge(int(j), int(k), (int(d1), int(d2)))
                   for (j, k, (d1, d2)) in edges)
    nerve = Nerve(n_vertices, parsed, tuple(tuple(sorted(t)) for t in triangles))
    _validate_nerve(nerve)
    return nerve


def _validate_nerve(nerve: Nerve) -> None:
    adj = {v: set() for v in range(nerve.n_vertices)}
    for e in nerve.edges:
        if not (0 <= e.j < nerve.n_vertices and 0 <= e.k < nerve.n_vertices):
            raise IndexMismatch("edge endpoint out of range")
        adj[e.j].add(e.k)
        adj[e.k].add(e.j)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != nerve.n_vertices:
        raise IndexMismatch("nerve is not connected")
    pair_count = {}
    for e in nerve.edges:
        key = tuple(sorted((e.j, e.k)))
        pair_count[key] = pair_count.get(key, 0) + 1
    for (i, j, k) in nerve.triangles:
        for (x, y) in ((i, j), (j, k), (i, k)):
            if pair_count.get(tuple(sorted((x, y))), 0) != 1:
                raise IndexMismatch(
                    f"triangle ({i},{j},{k}) needs a unique edge for ({x},{y})")
        lij, ljk, lik = (nerve.deck_of(i, j), nerve.deck_of(j, k),
                         nerve.deck_of(i, k))
        if (lij[0] + ljk[0], lij[1] + ljk[1]) != lik:
            raise IndexMismatch(
                f"deck labels violate additivity on triangle ({i},{j},{k})")


# ---------------------------------------------------------------------------
# twisted complexes
# ---------------------------------------------------------------------------

_BITS_LADDER = (128, 320, 768, 2048)


@dataclass(frozen=True)
class TwistedComplex:
    """Cover + bundle power: transition constants of F^level on the nerve."""

    cover: Nerve
    bundle: FlatLineBundle
    level: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    # -- certified angle data ----------------------------------------------

    def fracs(self, bits: int = 128):
        """Certified (level*p mod 1, level*q mod 1)."""
        key = ("fracs", bits)
        if key not in self._cache:
            self._cache[key] = (scaled_frac(self.bundle.p, self.level, bits),
                                scaled_frac(self.bundle.q, self.level, bits))
        return self._cache[key]

    def mods(self, bits: int = 128):
        """Certified (level*p mod m, level*q mod m) for grid covers."""
        m = self.cover.grid_m
        key = ("mods", bits)
        if key not in self._cache:
            self._cache[key] = (scaled_mod(self.bundle.p, self.level, m, bits),
                                scaled_mod(self.bundle.q, self.level, m, bits))
        return self._cache[key]

    def edge_angles(self, bits: int = 128) -> list:
        """Per-edge angles in (-1/2, 1/2] with s = exp(2*pi*i*angle)."""
        key = ("angles", bits)
        if key not in self._cache:
            fp, fq = self.fracs(bits)
            angles = []
            for e in self.cover.edges:
                a = fp * e.deck[0] + fq * e.deck[1]
                angles.append(reduce_half(a.round_out(bits + 16)))
            self._cache[key] = angles
        return self._cache[key]

    @property
    def transitions_array(self) -> np.ndarray:
        if "s" not in self._cache:
            angs = self.edge_angles()
            self._cache["s"] = np.array(
                [np.exp(1j * _TWO_PI * float(a.mid)) for a in angs],
                dtype=np.complex128)
        return self._cache["s"]

    @property
    def matrix(self) -> np.ndarray:
        """Coboundary matrix: row e has -1 in column j and s_e in column k."""
        if "matrix" not in self._cache:
            A = np.zeros((self.cover.n_edges, self.cover.n_vertices),
                         dtype=np.complex128)
            s = self.transitions_array
            for idx, e in enumerate(self.cover.edges):
                A[idx, e.j] += -1.0
                A[idx, e.k] += s[idx]
            self._cache["matrix"] = A
        return self._cache["matrix"]

    # -- exact triviality --------------------------------------------------

    def is_trivial_twist(self) -> bool:
        """True iff the twisted-constant sheaf has a global section (exact).

        Grid covers: both components of level*(p, q) are integers.  Custom
        nerves: the holonomy along a cycle basis vanishes exactly.
        """
        rp = is_rational_theta(theta_scale(self.bundle.p, self.level))
        rq = is_rational_theta(theta_scale(self.bundle.q, self.level))
        if self.cover.grid_m is not None:
            return (rp is not None and rq is not None
                    and rp.denominator == 1 and rq.denominator == 1)
        if rp is None or rq is None:
            return False
        return all(_cycle_frac(rp, rq, cyc) == 0
                   for cyc in _cycle_basis_decks(self.cover))

    def triangle_residual(self) -> float:
        """max over triangles of |s_ij * s_jk - s_ik| (cocycle identity)."""
        s = self.transitions_array
        table = self.cover.oriented()

        def s_of(x, y):
            idx, sign = table[(x, y)]
            return s[idx] if sign == 1 else np.conj(s[idx])

        worst = 0.0
        for (i, j, k) in self.cover.triangles:
            worst = max(worst, abs(s_of(i, j) * s_of(j, k) - s_of(i, k)))
        return worst


def _cycle_basis_decks(nerve: Nerve):
    """Total deck label around each independent cycle (tree + chord)."""
    tree_deck = {0: (0, 0)}
    order = [0]
    adj = {}
    for idx, e in enumerate(nerve.edges):
        adj.setdefault(e.j, []).append((e.k, idx, 1))
        adj.setdefault(e.k, []).append((e.j, idx, -1))
    tree_edges = set()
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for (w, idx, sign) in adj.get(v, ()):  # deterministic order
            if w not in tree_deck:
                d = nerve.edges[idx].deck
                dv = tree_deck[v]
                tree_deck[w] = (dv[0] + sign * d[0], dv[1] + sign * d[1])
                tree_edges.add(idx)
                order.append(w)
    cycles = []
    for idx, e in enumerate(nerve.edges):
        if idx in tree_edges:
            continue
        dj, dk = tree_deck[e.j], tree_deck[e.k]
        cycles.append((dj[0] + e.deck[0] - dk[0], dj[1] + e.deck[1] - dk[1]))
    return cycles


def _cycle_frac(rp: Fraction, rq: Fraction, cyc) -> Fraction:
    return (rp * cyc[0] + rq * cyc[1]) % 1


def transitions(cover: Nerve, F: FlatLineBundle, n: int) -> TwistedComplex:
    """Transition constants of F^n on the cover."""
    return TwistedComplex(cover, F, n)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cochain0:
    cover: Nerve
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.cover.n_vertices,):
            raise IndexMismatch("0-cochain length does not match the cover")
        object.__setattr__(self, "values", v)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


@dataclass(frozen=True)
class Cochain1:
    cover: Nerve
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.cover.n_edges,):
            raise IndexMismatch("1-cochain length does not match the cover")
        object.__setattr__(self, "values", v)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


def coboundary(cx: TwistedComplex, f: Cochain0) -> Cochain1:
    """(delta f)_jk = -f_j + s_jk * f_k on each stored edge."""
    if f.cover != cx.cover:
        raise IndexMismatch("cochain indexed against a different cover")
    return Cochain1(cx.cover, cx.matrix @ f.values)


def cocycle_residual(cx: TwistedComplex, g: Cochain1) -> float:
    """max over triangles of |g_ik - g_ij - s_ij * g_jk|."""
    if g.cover != cx.cover:
        raise IndexMismatch("cochain indexed against a different cover")
    s = cx.transitions_array
    table = cx.cover.oriented()

    def val(x, y):
        idx, sign = table[(x, y)]
        if sign == 1:
            return g.values[idx], s[idx]
        return -np.conj(s[idx]) * g.values[idx], np.conj(s[idx])

    worst = 0.0
    for (i, j, k) in cx.cover.triangles:
        gij, sij = val(i, j)
        gjk, _ = val(j, k)
        gik, _ = val(i, k)
        worst = max(worst, abs(gik - gij - sij * gjk))
    return worst


# ---------------------------------------------------------------------------
# certified spectral data for grid covers
# ---------------------------------------------------------------------------

def _mode_sins(cx: TwistedComplex, xi, bits: int) -> list:
    """Certified per-class |sin(pi*psi)| intervals for one Fourier mode."""
    m = cx.cover.grid_m
    w1, w2 = cx.mods(bits)
    out = []
    for (d1, d2) in _DELTAS:
        psi = ((w1 + xi[0]) * d1 + (w2 + xi[1]) * d2) * Fraction(1, m)
        u = dist_to_int(psi.round_out(bits + 16))
        out.append(sin_pi(u, min(bits, 256)))
    return out


def _float_mode_stats(cx: TwistedComplex, m: int):
    """Float (max|sin|, sigma^2) per mode, from exactly reduced fractions.

    Used only to select candidate modes; the 2x selection collar dwarfs the
    float evaluation error because the angle reduction happened exactly.
    """
    w1, w2 = cx.mods(192)
    w1f, w2f = float(w1.mid), float(w2.mid)
    stats = []
    for x1 in range(m):
        for x2 in range(m):
            mx, s2 = 0.0, 0.0
            for (d1, d2) in _DELTAS:
                psi = ((w1f + x1) * d1 + (w2f + x2) * d2) / m
                r = abs(psi - round(psi))
                sv = abs(math.sin(math.pi * r))
                mx = max(mx, sv)
                s2 += 4.0 * sv * sv
            stats.append(((x1, x2), mx, s2))
    return stats


def _grid_spectral(cx: TwistedComplex):
    """Certified (sigma_min interval, best mode xi*, its max|sin| interval).

    A float pass over all m^2 modes selects the argmin-sigma and
    argmin-max|sin| candidates; only those get exact interval evaluation,
    retried at higher precision until conclusive (sigma_min must be
    certified positive, else the level is numerically indistinguishable
    from torsion at the precision cap).
    """
    if "spectral" in cx._cache:
        return cx._cache["spectral"]
    if cx.is_trivial_twist():
        raise TorsionLevel(
            f"bundle power is trivial at level {cx.level}: kernel is nontrivial")
    m = cx.cover.grid_m
    stats = _float_mode_stats(cx, m)
    xi_sigma = min(stats, key=lambda t: t[2])[0]
    xi_ratio = min(stats, key=lambda t: t[1])[0]
    # float mode selection can mis-order ties at ~1e-15 relative; widen the
    # certified lower endpoint by a tie margin so sigma_lo stays a true
    # lower bound for the minimum over all modes
    tie = Fraction(1, 10**12)
    for bits in _BITS_LADDER:
        sins_sigma = _mode_sins(cx, xi_sigma, bits)
        sig2 = RealInterval.point(0)
        for sv in sins_sigma:
            sig2 = sig2 + sv * sv * 4
        sigma_min = sig2.sqrt(min(bits, 256))
        sigma_min = RealInterval(sigma_min.lo * (1 - tie), sigma_min.hi)
        sins_ratio = (sins_sigma if xi_ratio == xi_sigma
                      else _mode_sins(cx, xi_ratio, bits))
        mx = RealInterval(max(s.lo for s in sins_ratio),
                          max(s.hi for s in sins_ratio))
        if sigma_min.lo > 0 and mx.lo > 0:
            data = (sigma_min, xi_ratio, mx)
            cx._cache["spectral"] = data
            return data
    raise PrecisionExhausted(
        f"cannot certify a positive singular value at level {cx.level}")


def _grid_mode_vector(cx: TwistedComplex, xi) -> np.ndarray:
    """Unit-modulus extremal 0-cochain: gauge times Fourier mode xi."""
    m = cx.cover.grid_m
    w1, w2 = cx.mods(128)
    c1 = float(w1.mid) + xi[0]
    c2 = float(w2.mid) + xi[1]
    vals = np.empty(cx.cover.n_vertices, dtype=np.complex128)
    for v, (a, b) in enumerate(cx.cover.lifts):
        vals[v] = np.exp(1j * _TWO_PI * ((c1 * a + c2 * b) / m))
    return vals


def _grid_mode_coboundary(cx: TwistedComplex, xi, fvals: np.ndarray) -> np.ndarray:
    """delta of a mode vector, evaluated per edge from exact phase gaps.

    (delta f)_e = f_j * (exp(2*pi*i*psi_e) - 1) with psi_e depending only on
    the displacement class; evaluating 2*sin(pi*psi)*i*exp(i*pi*psi) from the
    reduced psi keeps full relative accuracy even when psi ~ 1e-50, where a
    float subtraction -f_j + s*f_k would be pure cancellation noise.
    """
    m = cx.cover.grid_m
    bits = 320
    w1, w2 = cx.mods(bits)
    psi_of = {}
    for (d1, d2) in _DELTAS:
        psi = ((w1 + xi[0]) * d1 + (w2 + xi[1]) * d2) * Fraction(1, m)
        psi_of[(d1, d2)] = float(reduce_half(psi.round_out(bits + 16)).mid)
    out = np.empty(cx.cover.n_edges, dtype=np.complex128)
    for idx, e in enumerate(cx.cover.edges):
        psi = psi_of[e.delta]
        factor = 2.0 * math.sin(math.pi * psi) * (
            1j * complex(math.cos(math.pi * psi), math.sin(math.pi * psi)))
        out[idx] = fvals[e.j] * factor
    return out


# ---------------------------------------------------------------------------
# solving and Ueda bounds
# ---------------------------------------------------------------------------

_SIGMA_FLOAT_FLOOR = 1e-10


def _sigma_float(cx: TwistedComplex) -> float:
    return float(np.linalg.svd(cx.matrix, compute_uv=False)[-1])


def _require_solvable(cx: TwistedComplex) -> float:
    """Certified-positive sigma_min, or the appropriate error."""
    if cx.is_trivial_twist():
        raise TorsionLevel(
            f"bundle power is trivial at level {cx.level}: kernel is nontrivial")
    if cx.cover.grid_m is not None:
        sigma, _, _ = _grid_spectral(cx)
        return float(sigma.lo)
    sigma = _sigma_float(cx)
    if sigma < _SIGMA_FLOAT_FLOOR:
        raise PrecisionExhausted(
            "level too close to torsion for a floating-point solve on a "
            "custom nerve")
    return sigma


def solve_coboundary(cx: TwistedComplex, g: Cochain1,
                     cocycle_tol: float = 1e-8,
                     solve_tol: float = 1e-10):
    """Unique f with delta f = g; least-squares solve plus residual report."""
    if g.cover != cx.cover:
        raise IndexMismatch("cochain indexed against a different cover")
    sigma = _require_solvable(cx)
    scale = max(g.sup_norm, 1e-300)
    tri_res = cocycle_residual(cx, g)
    if tri_res > cocycle_tol * scale:
        raise NotACocycle(
            f"triangle residual {tri_res:.3g} exceeds {cocycle_tol:.1g} * |g|")
    if sigma < _SIGMA_FLOAT_FLOOR:
        raise PrecisionExhausted(
            f"sigma_min ~ {sigma:.3g} at level {cx.level}: float solve "
            "cannot reach the unique solution")
    sol, *_ = np.linalg.lstsq(cx.matrix, g.values, rcond=None)
    post = cx.matrix @ sol - g.values
    post_res = float(np.max(np.abs(post)))
    if post_res > solve_tol * scale:
        raise NotACocycle(
            f"least-squares residual {post_res:.3g} exceeds "
            f"{solve_tol:.1g} * |g|: input is not a coboundary")
    report = {"cocycle_residual": tri_res, "post_residual": post_res,
              "sigma_min": sigma}
    return Cochain0(cx.cover, sol), report


@dataclass(frozen=True)
class UedaBounds:
    """Certified bracket for the constant-cochain Ueda constant.

    K_lower is an achieved sup-norm ratio |f|/|delta f| (a true lower
    bound); K_upper = sqrt(|E|)/sigma_min dominates the constant via norm
    equivalence.
    """

    K_lower: float
    K_upper: float
    argmax: Cochain0
    sigma_min: float


def _ratio_float(cx: TwistedComplex, f: np.ndarray) -> float:
    df = cx.matrix @ f
    num = float(np.max(np.abs(f)))
    den = float(np.max(np.abs(df)))
    if den < 1e-10 * num:
        return 0.0  # not float-certifiable; caller ignores
    return (num / den) * (1.0 - 1e-9)


def _local_search(cx: TwistedComplex, start: np.ndarray, seed: int,
                  iters: int) -> tuple:
    rng = np.random.default_rng(seed)
    best = start / max(np.max(np.abs(start)), 1e-300)
    best_ratio = _ratio_float(cx, best)
    step = 0.5
    cur = best.copy()
    for _ in range(iters):
        cand = cur + step * (rng.standard_normal(len(cur))
                             + 1j * rng.standard_normal(len(cur)))
        cand /= max(np.max(np.abs(cand)), 1e-300)
        r = _ratio_float(cx, cand)
        if r > best_ratio:
            best, best_ratio, cur = cand, r, cand
            step = min(0.5, step * 1.5)
        else:
            step *= 0.85
            if step < 1e-6:
                step = 0.5
                cur = best.copy()
    return best, best_ratio


def ueda_bounds(cx: TwistedComplex, seed: int = 0,
                search_iters: int = 120) -> UedaBounds:
    """Certified lower/upper bounds for K_const of the twisted complex."""
    if cx.is_trivial_twist():
        raise TorsionLevel(
            f"bundle power is trivial at level {cx.level}")
    E = cx.cover.n_edges
    if cx.cover.grid_m is not None:
        sigma, xi, mx_sin = _grid_spectral(cx)
        k_upper = float(math.sqrt(E) / sigma.lo)
        mode = _grid_mode_vector(cx, xi)
        k_lower = float(1 / (2 * mx_sin.hi))
        argmax = mode
        sigma_mid = float(sigma.mid)
        if sigma.lo > 1e-8:  # refinement trustworthy in floats
            cand, r = _local_search(cx, mode, seed, search_iters)
            if r > k_lower:
                k_lower, argmax = r, cand
    else:
        sigma_mid = _sigma_float(cx)
        if sigma_mid < _SIGMA_FLOAT_FLOOR:
            raise PrecisionExhausted(
                "custom nerve level too close to torsion for float bounds")
        k_upper = math.sqrt(E) / (sigma_mid * (1.0 - 1e-8))
        _, _, vh = np.linalg.svd(cx.matrix)
        vec = np.conj(vh[-1])
        argmax, k_lower = _local_search(cx, vec, seed, search_iters)
    k_lower = min(k_lower, k_upper)  # interval slack guard
    return UedaBounds(k_lower, k_upper, Cochain0(cx.cover, argmax), sigma_mid)


def extremal_constant_pair(cx: TwistedComplex):
    """(f, delta f, certified ratio_lo) for the extremal constant cochain.

    Grid covers use the extremal Fourier mode with stably evaluated phase
    gaps; custom nerves fall back to the float argmax from ueda_bounds.
    """
    if cx.cover.grid_m is not None:
        _, xi, mx_sin = _grid_spectral(cx)
        f = _grid_mode_vector(cx, xi)
        g = _grid_mode_coboundary(cx, xi, f)
        ratio_lo = float(1 / (2 * mx_sin.hi))
        return Cochain0(cx.cover, f), Cochain1(cx.cover, g), ratio_lo
    b = ueda_bounds(cx)
    g = coboundary(cx, b.argmax)
    return b.argmax, g, b.K_lower


def ueda_oracle(cx: TwistedComplex, samples: int, seed: int = 0) -> float:
    """Best sup-norm ratio over seeded random samples; test oracle only."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if cx.is_trivial_twist():
        raise TorsionLevel(f"bundle power is trivial at level {cx.level}")
    rng = np.random.default_rng(seed)
    J = cx.cover.n_vertices
    A = cx.matrix
    best = 0.0
    remaining = samples
    chunk = max(1, min(200_000, samples))
    while remaining > 0:
        nbatch = min(chunk, remaining)
        remaining -= nbatch
        f = rng.standard_normal((nbatch, J)) + 1j * rng.standard_normal((nbatch, J))
        df = f @ A.T
        num = np.max(np.abs(f), axis=1)
        den = np.max(np.abs(df), axis=1)
        ok = den > 1e-12 * num
        if np.any(ok):
            best = max(best, float(np.max(num[ok] / den[ok])))
    return best


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def nerve_to_json(nerve: Nerve) -> dict:
    return {
        "vertices": list(range(nerve.n_vertices)),
        "edges": [{"from": e.j, "to": e.k, "deck": list(e.deck)}
                  for e in nerve.edges],
        "triangles": [list(t) for t in nerve.triangles],
    }


def nerve_from_json(obj: dict) -> Nerve:
    n = len(obj["vertices"])
    edges = [(e["from"], e["to"], tuple(e["deck"])) for e in obj["edges"]]
    return custom_nerve(n, edges, [tuple(t) for t in obj.get("triangles", [])])


def cochain_to_csv(values: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "re", "im"])
    for i, v in enumerate(np.asarray(values)):
        w.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def cochain_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    data = rows[1:] if rows and rows[0][:1] == ["id"] else rows
    out = np.zeros(len(data), dtype=np.complex128)
    for row in data:
        out[int(row[0])] = complex(float(row[1]), float(row[2]))
    return out
