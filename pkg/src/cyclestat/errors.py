"""Exception hierarchy.

Every error belongs to one of three categories that map onto CLI exit
codes: bad input data or parameters (2), input that is structurally
unusable for cycle statistics (3), and numerical failures (4).
"""


class CycleStatError(Exception):
    """Base class for all cyclestat errors."""

    exit_code = 1


class InputError(CycleStatError):
    """Malformed input data or invalid parameters."""

    exit_code = 2


class StructureError(CycleStatError):
    """Input parses fine but lacks the structure the analysis needs."""

    exit_code = 3


class NumericError(CycleStatError):
    """A numerical routine failed."""

    exit_code = 4


# skeleton parsing / loading
class EmptyFrameError(InputError):
    """Frame document contains no detected people."""


class MalformedKeypointsError(InputError):
    """Keypoint payload is missing or has the wrong length."""


class AllJointsMissingError(InputError):
    """Every joint of the selected person has zero confidence."""


class NoFramesError(InputError):
    """Source yields no usable frames."""


class GapTooLongError(InputError):
    """A run of empty frames exceeds the interpolation limit."""


class DegenerateTorsoError(InputError):
    """Neck and mid-hip coincide; torso length cannot scale the pose."""


# manifold
class DimensionMismatchError(InputError):
    """Matrices or coordinate arrays have incompatible shapes."""


class EigenFailureError(NumericError):
    """Symmetric eigendecomposition did not converge."""


# alignment
class EmptySequenceError(InputError):
    """Alignment requires non-empty sequences."""


# cycles
class TemplateTooShortError(InputError):
    """Cycle-profile template must span at least two frames."""


class TemplateTooLongError(InputError):
    """Cycle-profile template must not exceed half the sequence."""


class SequenceTooShortError(InputError):
    """Sequence too short to pick a template length."""


class NoMinimaError(InputError):
    """No profile minima available for clustering."""


class EmptyListError(InputError):
    """Period estimation needs at least one minimum index."""


class TooFewCyclesError(StructureError):
    """Fewer than two complete cycles; no cross-cycle statistics."""


# statistics
class EmptySetError(InputError):
    """Pose-set operation on an empty set."""


class BarycenterNonConvergenceError(NumericError):
    """Barycenter fixed-point iteration did not reach tolerance."""


class PathMismatchError(InputError):
    """Warping path does not span the given statistic sequences."""


# synth
class InvalidConfigError(InputError):
    """Synthetic-sequence configuration violates its invariants."""


class TooLongForOracleError(InputError):
    """Brute-force oracle only enumerates sequences of length <= 8."""


class LengthMismatchError(InputError):
    """Eigenvalue lists must have equal length."""
