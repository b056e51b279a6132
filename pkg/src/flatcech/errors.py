"""Exception types shared across the toolkit.

Every failure mode that callers are expected to handle gets its own class;
they all derive from FlatCechError so a CLI can map them to exit codes.
"""


class FlatCechError(Exception):
    """Base class for all toolkit errors."""


class PrecisionExhausted(FlatCechError):
    """The available working precision cannot certify the requested result."""


class NotDefined(FlatCechError):
    """A quantity was requested beyond its (finite) domain of definition."""


class InsufficientHorizon(FlatCechError):
    """Too few data points to run a classification heuristic."""


class InsufficientLevels(FlatCechError):
    """Too few stored series levels for a convergence/radius statement."""


class ScheduleInvalid(FlatCechError):
    """An asymptotically-zero construction schedule violates its contract."""


class TooCoarse(FlatCechError):
    """Requested cover is too coarse to be a good cover of the torus."""


class IndexMismatch(FlatCechError):
    """A cochain is indexed against the wrong cover or complex."""


class TorsionLevel(FlatCechError):
    """The twisted coboundary map has nontrivial kernel at this level."""


class NotACocycle(FlatCechError):
    """Input 1-cochain fails the twisted cocycle identity beyond tolerance."""


class NoLevelsFound(FlatCechError):
    """Witness scan exhausted its level budget without a qualifying level."""


class InconsistentInput(FlatCechError):
    """Numeric inputs contradict each other (e.g. non-integer dimension)."""


class TorsionInput(FlatCechError):
    """Operation requires a non-torsion bundle but received a torsion one."""
