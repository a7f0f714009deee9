"""Exception types shared by the ladderlab modules."""
from __future__ import annotations


class LadderLabError(Exception):
    """Base class for every error raised deliberately by the package."""


class DomainError(LadderLabError, ValueError):
    """Argument outside the domain of a function."""


class ResourceError(LadderLabError):
    """An evaluation budget was exhausted."""


class BranchLossError(LadderLabError):
    """Continuous tracking of arg zeta lost the branch."""


class CoverageError(LadderLabError, ValueError):
    """A requested range is not covered by a phase track or chain."""


class BracketError(LadderLabError):
    """A monotone root search could not bracket its root."""

    def __init__(self, message: str, window: tuple[float, float] | None = None):
        super().__init__(message)
        self.window = window


class IterationDepthError(LadderLabError):
    """An iterate of the ladder fell below the admissible floor."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class AdmissibilityError(LadderLabError, ValueError):
    """tau lies below the admissibility threshold of a functional."""


class RangeCapError(LadderLabError, ValueError):
    """An integration endpoint would exceed the desk-scale height cap."""

    def __init__(self, message: str, max_feasible: float | None = None):
        super().__init__(message)
        self.max_feasible = max_feasible


class IndexConstraintError(LadderLabError, ValueError):
    """Chain indices violate 1 <= r <= s-1 <= k-1 or similar."""


class ConfigError(LadderLabError, ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class LadderConsistencyError(LadderLabError):
    """An iterate left the interval the ladder says it must lie in."""
