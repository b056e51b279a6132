"""Diophantine classification of unitary flat line bundles on elliptic
curves, with certified coboundary bounds on finite torus covers, degreewise
formal solvers, non-Hausdorff witness families, and theorem-level
cohomology profiles.
"""

from . import classify, cover, diophantine, pic0, series
from .classify import (
    Blowup9Spec,
    SurfaceSpec,
    ToroidalSpec,
    blowup9_ninth_point,
    blowup9_profile,
    neighborhood_profile,
    surface_h1_dim,
    theorem_main_profile,
    toroidal_classify,
)
from .cover import (
    build_grid_cover,
    coboundary,
    cocycle_residual,
    custom_nerve,
    solve_coboundary,
    transitions,
    ueda_bounds,
    ueda_oracle,
)
from .diophantine import (
    best_approx_error,
    cf_convergents,
    classify_growth,
    golden_conjugate,
    make_az_theta,
    orbit_distance,
)
from .errors import (
    FlatCechError,
    InconsistentInput,
    IndexMismatch,
    InsufficientHorizon,
    InsufficientLevels,
    NoLevelsFound,
    NotACocycle,
    NotDefined,
    PrecisionExhausted,
    ScheduleInvalid,
    TooCoarse,
    TorsionInput,
    TorsionLevel,
)
from .pic0 import FlatLineBundle, bundle, case_label, distance_to_trivial, power
from .series import (
    build_laurent_witness,
    build_taylor_witness,
    convergence_check,
    partial_coboundary_gap,
    radius_verdict,
    solve_formal,
)

__version__ = "0.1.0"
