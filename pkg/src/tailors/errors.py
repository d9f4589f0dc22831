"""Exception types raised across the audio pipeline and the stats workbench."""


class TailorsError(Exception):
    """Base class for every error this package raises deliberately."""


# audio decoding and framing


class MalformedHeader(TailorsError):
    """The RIFF/WAVE container structure is invalid."""


class UnsupportedFormat(TailorsError):
    """The file is a valid WAV but outside the supported PCM subset."""


class TruncatedData(TailorsError):
    """The data chunk holds fewer bytes than its declared size."""


class SampleRateMismatch(TailorsError):
    """Paired stems do not share a sample rate."""


class WindowTooLarge(TailorsError):
    """The analysis window exceeds the signal length."""


class AudioTooShort(TailorsError):
    """The signal is shorter than a single analysis window."""


# mapping


class EmptySeries(TailorsError):
    """A feature series with no frames cannot be normalized or mapped."""


class OutOfRange(TailorsError):
    """A value landed outside the [0, 1] domain a mapping rule requires."""


# frame stream


class SinkWriteFailure(TailorsError):
    """The output sink rejected a write."""


class PortInUse(TailorsError):
    """The requested serving port could not be bound."""


class MalformedStream(TailorsError):
    """A frame stream line failed to parse or violated stream ordering."""


class SchemaMismatch(MalformedStream):
    """The stream header declares a schema version this reader does not speak."""


# survey ingestion


class SurveyFormatError(TailorsError):
    """Base class for survey CSV validation failures."""


class BadHeader(SurveyFormatError):
    """The CSV header row does not match the expected column names."""


class InvalidCondition(SurveyFormatError):
    """Condition label outside the known set."""


class InvalidFeature(SurveyFormatError):
    """Feature word not in the vocabulary of its survey."""


class InvalidMusicId(SurveyFormatError):
    """Music identifier is not a positive integer."""


class ScoreOutOfRange(SurveyFormatError):
    """Score outside the 7-point response scale."""


class DuplicateKey(SurveyFormatError):
    """Two rows share (participant, music, condition, survey, feature)."""


class MissingCell(TailorsError):
    """An aggregation asked for a cell no record covers."""


# statistics


class DegenerateInput(TailorsError):
    """Too little data, or data without variation, for the requested test."""


class AllZeroDifferences(TailorsError):
    """Every paired difference is zero, so signed ranks are undefined."""


class RankDeficient(TailorsError):
    """The design matrix does not have full column rank."""


class CoefficientOutOfRange(TailorsError):
    """A correlation-scaled coefficient must lie strictly inside (-1, 1)."""


class ReportError(TailorsError):
    """A table build failed; the message names the table and cell."""
