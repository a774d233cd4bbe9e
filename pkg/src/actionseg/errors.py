"""Exception types raised across the package."""


class ActionsegError(Exception):
    """Base class for all errors raised by actionseg."""


class DegenerateVector(ActionsegError):
    """A joint-angle ray has zero length."""


class TopologyMismatch(ActionsegError):
    """A topology index is out of range for the frame's keypoints."""


class NoPriorValue(ActionsegError):
    """The first frame of a stream is already invalid, nothing to carry forward."""


class WindowTooShort(ActionsegError):
    """Piecewise fit needs at least 4 samples."""


class DegenerateInput(ActionsegError):
    """Geometric fit received coincident points."""


class SingularFit(ActionsegError):
    """Least-squares system is rank deficient (e.g. collinear circle points)."""


class ShapeMismatch(ActionsegError):
    """Two representations have different keypoint counts."""


class WindowMismatch(ActionsegError):
    """Feature samples do not cover the segment window."""


class NonConsecutiveFrame(ActionsegError):
    """Frame indices must increase by exactly 1."""


class BufferCapacityError(ActionsegError):
    """A pending segment needs frames older than the ring buffer retains."""


class InvalidScript(ActionsegError):
    """Motion script timelines are inconsistent."""


class ParseError(ActionsegError):
    """An input line could not be parsed; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConfigError(ActionsegError):
    """Unknown or invalid configuration key/value."""


class InvalidTruth(ActionsegError):
    """A true repetition count below 1 cannot be scored."""
