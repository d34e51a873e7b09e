"""A minimal subshift of [0,1]^Z with full mean dimension, built level by level."""

__version__ = "0.1.0"

from .dyadic import DyadicInterval, DyadicRational, contains, subdivide  # noqa: E402
from .errors import (  # noqa: E402
    InfeasibleError,
    MembershipError,
    RepresentationError,
    ScheduleError,
    ScheduleInconsistencyError,
    SubshiftError,
    WindowError,
)
from .hierarchy import BlockHierarchy, LengthSpectrum, LevelParams  # noqa: E402
from .schedule import EtaSchedule, ValidationReport, minimal_repetition, validate_schedule  # noqa: E402

__all__ = [
    "BlockHierarchy",
    "DyadicInterval",
    "DyadicRational",
    "EtaSchedule",
    "InfeasibleError",
    "LengthSpectrum",
    "LevelParams",
    "MembershipError",
    "RepresentationError",
    "ScheduleError",
    "ScheduleInconsistencyError",
    "SubshiftError",
    "ValidationReport",
    "WindowError",
    "contains",
    "minimal_repetition",
    "subdivide",
    "validate_schedule",
]
