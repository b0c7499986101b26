"""Exception types raised by the library.

Every error is a subclass of :class:`ShapeFilterError` so callers (and the
CLI, which maps them onto exit codes) can catch library failures in one
place without swallowing genuine bugs.
"""


class ShapeFilterError(Exception):
    """Base class for all errors raised by this package."""


# --- mask / contour extraction ---------------------------------------------

class EmptyMask(ShapeFilterError):
    """Mask contains no foreground pixel."""


class DegenerateComponent(ShapeFilterError):
    """Largest component has fewer than 4 boundary pixels."""


class TooFewPoints(ShapeFilterError):
    """Contour has fewer distinct points than the operation requires."""


class InvalidSampleCount(ShapeFilterError):
    """Requested resampling count is below the supported minimum."""


# --- SRV shape space --------------------------------------------------------

class DegenerateSegment(ShapeFilterError):
    """Contour velocity vanishes somewhere (coincident points)."""


class SampleCountMismatch(ShapeFilterError):
    """Two shapes do not share the same sample count."""


# --- weighting --------------------------------------------------------------

class InvalidLength(ShapeFilterError):
    """A weight vector of non-positive length was requested."""


class LengthMismatch(ShapeFilterError):
    """Paired sequences differ in length."""


class EmptyPath(ShapeFilterError):
    """Operation requires a non-empty shape path."""


# --- spline solver -----------------------------------------------------------

class TooFewPositiveWeights(ShapeFilterError):
    """Fewer than 2 strictly positive weights; fit is underdetermined."""


class NonIncreasingTimes(ShapeFilterError):
    """Abscissae are not strictly increasing."""


class OutOfRange(ShapeFilterError):
    """Evaluation point lies outside the fitted breakpoint range."""


# --- pipeline ----------------------------------------------------------------

class InsufficientFrames(ShapeFilterError):
    """Sequence has fewer frames than the filter requires."""


class AllWeightsZero(ShapeFilterError):
    """Every frame weight is zero; nothing constrains the fit."""


# --- metrics -----------------------------------------------------------------

class DimensionMismatch(ShapeFilterError):
    """Mask stacks disagree in frame count or frame dimensions."""


# --- embedding ---------------------------------------------------------------

class TooFewFrames(ShapeFilterError):
    """Embedding needs at least 3 frames."""


class DisconnectedGraph(ShapeFilterError):
    """Neighborhood graph is disconnected; raise k or inspect components.

    ``labels`` holds the per-frame component index.
    """

    def __init__(self, message: str, labels=None):
        super().__init__(message)
        self.labels = labels


# --- CLI ---------------------------------------------------------------------

class EmptyInput(ShapeFilterError):
    """Input path is missing or contains no readable frames."""
