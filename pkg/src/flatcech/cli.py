"""Command-line front end.

Subcommands wrap the library operations and emit JSON reports on stdout
plus optional CSV/JSON files.  Identical inputs and seeds produce
byte-identical outputs: no timestamps, fixed field order, repr-stable float
formatting, and seeded randomness only.

Exit codes: 0 success, 2 usage error, 3 precision exhausted, 4 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import classify as _classify
from . import cover as _cover
from . import series as _series
from .diophantine import (
    QuadraticIrrational,
    Rational,
    classify_growth,
    make_az_theta,
    theta_from_json,
)
from .errors import FlatCechError, PrecisionExhausted
from .pic0 import ComplexParam, bundle_from_json, distance_to_trivial, power

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_DOMAIN = 4


@dataclass(frozen=True)
class RunConfig:
    precision: int = 128
    horizon: int = 40
    seed: int = 0
    out: Optional[str] = None
    fmt: str = "json"

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be >= 64 bits")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_theta(args) -> object:
    if getattr(args, "quadratic", None):
        a, b, c, d = args.quadratic
        return QuadraticIrrational(a, b, c, d)
    if getattr(args, "rational", None):
        n, d = args.rational
        return Rational(n, d)
    if getattr(args, "az", False):
        return make_az_theta()
    if getattr(args, "theta", None):
        return theta_from_json(json.loads(args.theta))
    raise ValueError(
        "one of --quadratic / --rational / --az / --theta is required")


def _verdict_json(v) -> dict:
    return {
        "label": v.label,
        "certificate": v.certificate,
        "exponent": (None if v.exponent == float("inf") else v.exponent),
        "horizon": v.horizon,
        "torsion_order": v.torsion_order,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_classify_theta(args, cfg: RunConfig) -> int:
    theta = _parse_theta(args)
    v = classify_growth(theta, cfg.horizon)
    _emit(_dump(_verdict_json(v)), cfg.out)
    return EXIT_OK


def _cmd_bundle_case(args, cfg: RunConfig) -> int:
    F = bundle_from_json(json.loads(args.bundle))
    from .pic0 import case_label
    v = case_label(F, cfg.horizon)
    out = _verdict_json(v)
    out["distance_to_trivial"] = float(distance_to_trivial(F, cfg.precision).mid)
    _emit(_dump(out), cfg.out)
    return EXIT_OK


def _parse_levels(text: str):
    if ".." in text:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    return [int(text)]


def _cmd_ueda(args, cfg: RunConfig) -> int:
    cov = _cover.build_grid_cover(args.grid)
    F = bundle_from_json(json.loads(args.bundle))
    rows = []
    for n in _parse_levels(args.levels):
        cx = _cover.transitions(cov, F, n)
        b = _cover.ueda_bounds(cx, seed=cfg.seed)
        d = float(distance_to_trivial(power(F, n), cfg.precision).mid)
        rows.append((n, d, b.K_lower, b.K_upper))
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d", "K_lower", "K_upper"])
        for r in rows:
            w.writerow([r[0], repr(r[1]), repr(r[2]), repr(r[3])])
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(_dump([{"n": n, "d": d, "K_lower": kl, "K_upper": ku}
                     for n, d, kl, ku in rows]), cfg.out)
    return EXIT_OK


def _cmd_solve_cocycle(args, cfg: RunConfig) -> int:
    cov = _cover.build_grid_cover(args.grid)
    F = bundle_from_json(json.loads(args.bundle))
    cx = _cover.transitions(cov, F, args.level)
    values = _cover.cochain_from_csv(Path(args.cocycle).read_text())
    g = _cover.Cochain1(cov, values)
    f, report = _cover.solve_coboundary(cx, g)
    _emit(_cover.cochain_to_csv(f.values), cfg.out)
    sys.stderr.write(_dump({"residual": report["post_residual"],
                            "cocycle_residual": report["cocycle_residual"],
                            "sigma_min": report["sigma_min"]}) + "\n")
    return EXIT_OK


def _cmd_witness(args, cfg: RunConfig) -> int:
    cov = _cover.build_grid_cover(args.grid)
    N = bundle_from_json(json.loads(args.bundle))
    budget = args.budget
    if budget is None:
        try:
            budget = _series.default_az_budget(N.q)
        except TypeError:
            raise ValueError(
                "--budget is required unless the q-monodromy is a "
                "constructed asymptotically-zero number")
    if args.direction == "taylor":
        fam = _series.build_taylor_witness(cov, N, args.threshold,
                                           args.lambda_max, budget)
    else:
        fam = _series.build_laurent_witness(cov, N, None, args.lambda_max,
                                            budget)
    cert = _series.witness_certificate_json(fam)
    _emit(_dump(cert), cfg.out)
    if args.csv_out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "max_f", "R_pow_n", "pass"])
        for n in fam.order:
            wl = fam.levels[n]
            w.writerow([n, repr(wl.max_f), repr(wl.threshold),
                        int(wl.ratio > wl.threshold)])
        Path(args.csv_out).write_text(buf.getvalue())
    return EXIT_OK


def _cmd_toroidal(args, cfg: RunConfig) -> int:
    p = theta_from_json(json.loads(args.p))
    q = theta_from_json(json.loads(args.q))
    tau = ComplexParam(Fraction(args.tau_re), Fraction(args.tau_im))
    spec = _classify.ToroidalSpec(tau, p, q)
    _emit(_dump(_classify.toroidal_classify(spec, cfg.horizon)), cfg.out)
    return EXIT_OK


def _cmd_blowup9(args, cfg: RunConfig) -> int:
    theta = theta_from_json(json.loads(args.theta))
    spec = _classify.Blowup9Spec(theta)
    prof = _classify.blowup9_profile(spec, cfg.horizon)
    _emit(_dump(prof.to_json()), cfg.out)
    return EXIT_OK


def _cmd_profile(args, cfg: RunConfig) -> int:
    data = json.loads(args.surface)
    comps = tuple((bundle_from_json(c["bundle"]), c.get("degree", 0))
                  for c in data["components"])
    spec = _classify.SurfaceSpec(data["euler_number"], comps,
                                 data.get("dim_h1_x"))
    prof = _classify.theorem_main_profile(spec, cfg.horizon)
    _emit(_dump(prof.to_json()), cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128,
                        help="working precision in bits (>= 64)")
    common.add_argument("--horizon", type=int, default=40,
                        help="classification horizon (convergents/orbit points)")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed")
    common.add_argument("--out", type=str, default=None, help="output file")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        default="json")
    ap = argparse.ArgumentParser(
        prog="flatcech",
        description="Diophantine classification of flat line bundles with "
                    "certified coboundary bounds and witness cocycles")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("classify-theta", help="growth trichotomy of a number")
    p.add_argument("--quadratic", nargs=4, type=int, metavar=("A", "B", "C", "D"))
    p.add_argument("--rational", nargs=2, type=int, metavar=("NUM", "DEN"))
    p.add_argument("--az", action="store_true",
                   help="default asymptotically-zero construction")
    p.add_argument("--theta", type=str, help="ThetaSpec JSON")
    p.set_defaults(func=_cmd_classify_theta)

    p = add_parser("bundle-case", help="case label of a flat bundle orbit")
    p.add_argument("--bundle", type=str, required=True, help="bundle JSON")
    p.set_defaults(func=_cmd_bundle_case)

    p = add_parser("ueda", help="Ueda bounds along bundle powers")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--bundle", type=str, required=True)
    p.add_argument("--levels", type=str, default="1..10", help="e.g. 1..50")
    p.set_defaults(func=_cmd_ueda)

    p = add_parser("solve-cocycle", help="invert the twisted coboundary")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--bundle", type=str, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--cocycle", type=str, required=True, help="CSV file")
    p.set_defaults(func=_cmd_solve_cocycle)

    p = add_parser("witness", help="non-Hausdorff witness family")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--bundle", type=str, required=True)
    p.add_argument("--direction", choices=("taylor", "laurent"),
                   default="taylor")
    p.add_argument("--threshold", type=float, default=2.0,
                   help="R for Taylor witnesses")
    p.add_argument("--lambda-max", dest="lambda_max", type=int, default=3)
    p.add_argument("--budget", type=int, default=None,
                   help="level budget (default: schedule-derived)")
    p.add_argument("--csv-out", dest="csv_out", type=str, default=None)
    p.set_defaults(func=_cmd_witness)

    p = add_parser("toroidal", help="theta/wild toroidal classification")
    p.add_argument("--p", type=str, required=True, help="ThetaSpec JSON")
    p.add_argument("--q", type=str, required=True, help="ThetaSpec JSON")
    p.add_argument("--tau-re", type=float, default=0.0)
    p.add_argument("--tau-im", type=float, default=1.0)
    p.set_defaults(func=_cmd_toroidal)

    p = add_parser("blowup9", help="nine-point blow-up complement profile")
    p.add_argument("--theta", type=str, required=True, help="ThetaSpec JSON")
    p.set_defaults(func=_cmd_blowup9)

    p = add_parser("profile", help="main theorem profile for a surface")
    p.add_argument("--surface", type=str, required=True,
                   help='JSON {"euler_number": e, "components": [...]}')
    p.set_defaults(func=_cmd_profile)
    return ap


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig(args.precision, args.horizon, args.seed, args.out,
                        args.fmt)
        return args.func(args, cfg)
    except PrecisionExhausted as exc:
        sys.stderr.write(f"precision exhausted: {exc}\n")
        return EXIT_PRECISION
    except FlatCechError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
