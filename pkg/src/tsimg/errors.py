"""Exception types raised across the tsimg package."""


class TsimgError(Exception):
    """Base class for all tsimg errors."""


class ConstantSeriesError(TsimgError):
    """Series has max == min, so min-max rescaling is undefined."""


class InvalidSegmentsError(TsimgError):
    """PAA segment count outside [1, series length]."""


class MalformedLineError(TsimgError):
    """A dataset file line has the wrong field count or an unparseable number."""

    def __init__(self, path, line_number: int, reason: str):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {reason}")


class EmptyFileError(TsimgError):
    """Dataset file contains no nonempty lines."""


class UnknownGeneratorError(TsimgError):
    """Requested synthetic-data family does not exist."""


class LengthMismatchError(TsimgError):
    """Series lengths differ where a uniform length is required."""


class OutOfRangeError(TsimgError):
    """Value outside its permitted numeric range beyond tolerance."""


class InvalidBinCountError(TsimgError):
    """Quantile bin count outside [2, series length]."""


class InvalidTargetSizeError(TsimgError):
    """Blur target size outside [1, matrix size]."""


class RateOutOfRangeError(TsimgError):
    """Corruption rate outside (0, 1) or yields zero corrupted points."""


class DimMismatchError(TsimgError):
    """Vector or matrix dimensions inconsistent with the model/operation."""


class DivergenceError(TsimgError):
    """Training loss became non-finite."""


class EmptyMaskError(TsimgError):
    """Imputation scoring requires at least one masked index."""


class SingleClassError(TsimgError):
    """Classifier training requires at least two classes."""


class TooFewSamplesError(TsimgError):
    """Fewer samples than cross-validation folds."""


class EmptyGridError(TsimgError):
    """Every (size, quantile) grid combination was skipped."""


class EmptyTestSetError(TsimgError):
    """Evaluation requires a non-empty test set."""


class KindMismatchError(TsimgError):
    """Field matrix has the wrong kind or rescale mode for this operation."""


class IoFailureError(TsimgError):
    """File could not be read or written."""


class HeaderMismatchError(TsimgError):
    """Matrix file header contradicts the cell contents."""


class BadMagicError(TsimgError):
    """Model file does not start with the expected magic line."""
