"""Exception types shared across the toolkit."""

from __future__ import annotations


class SippError(Exception):
    """Base class for all toolkit errors."""


class ShapeError(SippError):
    """Dimensions are incompatible with the requested operation."""


class SingularMatrixError(SippError):
    """A matrix that must be invertible is not."""


class RankDeficiencyError(SippError):
    """An operation requires full (row) rank and the input lacks it."""


class NotOrthogonalError(SippError):
    """A precondition ``Q Q^T = I`` (within tolerance) fails."""


class NotHollowError(SippError):
    """Input must have a zero diagonal and nowhere-zero off-diagonal part."""


class StructureError(SippError):
    """Block structure or tangency preconditions are violated."""


class HollowOrderError(SippError):
    """No suitable hollow orthogonal matrix exists at the requested order."""


class TargetPatternError(SippError):
    """The requested target is not a super pattern of the seed's pattern."""


class DimensionCapError(SippError):
    """Exhaustive search is capped; the input exceeds the supported size."""


class FormatError(SippError):
    """A matrix, pattern, or atlas file is malformed."""


class AtlasFormatError(FormatError):
    """Atlas file parsing failed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ObstructionError(SippError):
    """No tangent direction can liberate the requested zero entries.

    ``obstructions`` holds the labeled left-nullspace basis vectors of the
    tangent verification matrix that block the request.
    """

    def __init__(self, message: str, obstructions=()):
        super().__init__(message)
        self.obstructions = tuple(obstructions)
