"""Exception types shared across the package."""


class ScribbleSegError(Exception):
    """Base class for all errors raised by this package."""


class EmptyTraceError(ScribbleSegError):
    """The trace raster contains no labeled pixels."""


class NoSeedsError(ScribbleSegError):
    """Cluster growing was invoked with an empty seed set."""


class DimensionMismatchError(ScribbleSegError):
    """Two rasters that must share dimensions do not."""


class InvalidThicknessError(ScribbleSegError):
    """Stroke thickness outside the supported set {1, 2, 4, 8}."""


class DegenerateStrokeError(ScribbleSegError):
    """Stroke has too few points for its tool."""


class UnknownCategoryError(ScribbleSegError):
    """Mask contains a value not covered by the palette."""


class MalformedPngError(ScribbleSegError):
    """Byte stream is not a decodable indexed-color PNG."""


class EmptyCategorySetError(ScribbleSegError):
    """IoU evaluation requested over an empty category set."""


class InvalidObjectCountError(ScribbleSegError):
    """Object count for score computation must be >= 1."""


class ScoreOutOfRangeError(ScribbleSegError):
    """Mean IoU outside [0, 1]."""


class EmptyMaskListError(ScribbleSegError):
    """Consensus requested over an empty mask list."""


class UnknownDatasetError(ScribbleSegError):
    """Dataset id not present in the store."""


class UnknownImageError(ScribbleSegError):
    """Image id not present in the dataset."""


class InsufficientImagesError(ScribbleSegError):
    """Dataset cannot assemble a batch for this user."""


class NotInSessionError(ScribbleSegError):
    """Image does not belong to the session's current batch."""


class IncompleteBatchError(ScribbleSegError):
    """Batch submitted before every image was refined."""


class UnknownSessionError(ScribbleSegError):
    """Session id not present in the store."""
