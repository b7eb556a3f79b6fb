"""Exception hierarchy shared across the pipeline.

All pipeline-specific failures derive from GaitPathError so the CLI can map
them to a data-error exit code in one place.
"""


class GaitPathError(Exception):
    """Base class for all pipeline errors."""


# geometry
class DegenerateQuad(GaitPathError):
    """A quad used for homography estimation has three (near-)collinear points."""


class SingularSystem(GaitPathError):
    """The homography system is rank-deficient or the matrix is not invertible."""


class PointAtInfinity(GaitPathError):
    """Applying a homography sent the point to the line at infinity (w' ~ 0)."""


class UncorrectableElevation(GaitPathError):
    """Elevation angle at or beyond 60 degrees; perspective cannot be corrected."""


# segmentation
class NonPositiveSigma(GaitPathError):
    """Gaussian denoising requires sigma > 0."""


class NoForeground(GaitPathError):
    """A binary mask expected to contain foreground pixels is empty."""


# ecoc
class DuplicateLabels(GaitPathError):
    """Class label list for a coding matrix contains duplicates."""


class SingleClassInput(GaitPathError):
    """Binary SVM training needs at least one example of each sign."""


class MissingClassSamples(GaitPathError):
    """A class required by the coding matrix has no training samples."""


class DimensionMismatch(GaitPathError):
    """Feature vector dimension does not match the model."""


# dcs
class EmptyStream(GaitPathError):
    """The frame stream handed to the classifier loop is empty."""


# trajectory
class InadmissibleViewpointJump(GaitPathError):
    """Consecutive viewpoints differ by more than one cyclic step."""


class InadmissibleTransition(GaitPathError):
    """A state transition outside the transition graph was requested."""


class EmptySequence(GaitPathError):
    """Trajectory estimation needs a nonempty state sequence."""


# evaluation
class LengthMismatch(GaitPathError):
    """Ground-truth and prediction sequences have different lengths."""


# cli / persistence
class IoFailure(GaitPathError):
    """A file could not be read, parsed, or written."""
