"""Exception types used across the library.

Built-in exceptions are reused where they are the natural fit:
``FileNotFoundError`` for missing files, ``IndexError`` for out-of-range
section indices, ``OSError`` for write failures.
"""


class DeckforgeError(Exception):
    """Base class for all library-specific errors."""


class EmptyInputError(DeckforgeError):
    """Input text was empty (or whitespace only)."""


class NoSectionsFoundError(DeckforgeError):
    """No recognizable headings; pass wrap_untitled=True to accept anyway."""


class EmptyCorpusError(DeckforgeError):
    """A fit/training routine received no usable documents."""


class MalformedHeaderError(DeckforgeError):
    """Embedding sidecar header does not describe the file contents."""


class DimensionMismatchError(DeckforgeError):
    """Vector or matrix dimensions do not line up."""


class NonFiniteValueError(DeckforgeError):
    """NaN or infinity where finite numbers are required."""


class KTooLargeError(DeckforgeError):
    """Requested more clusters than there are points."""


class NonSquareError(DeckforgeError):
    """Graph weight matrix is not square."""


class NegativeWeightError(DeckforgeError):
    """Graph weight matrix contains negative entries."""


class SummarySectionMismatchError(DeckforgeError):
    """Summaries do not line up one-to-one with summarizable sections."""


class DeckTooLargeError(DeckforgeError):
    """Deck exceeds the 999-slide limit of the package writer."""


class SignalTooShortError(DeckforgeError):
    """Signal shorter than one analysis window."""


class BadRangeError(DeckforgeError):
    """Invalid frequency range (fmin must be below fmax)."""


class NegativeMagnitudeError(DeckforgeError):
    """Magnitude spectrogram contains negative entries."""


class EmptyTextError(DeckforgeError):
    """Synthesis requested for empty text."""


class SynthesisTimeoutError(DeckforgeError):
    """Synthesis service did not answer within the timeout (after retries)."""


class ServiceUnreachableError(DeckforgeError):
    """Could not connect to the synthesis service (after retries)."""


class MalformedResponseError(DeckforgeError):
    """Synthesis service answered with a body we cannot interpret."""


class HttpStatusError(DeckforgeError):
    """Synthesis service answered with an HTTP error status."""

    def __init__(self, status_code: int, message: str = ""):
        self.status_code = status_code
        super().__init__(message or f"HTTP status {status_code}")


class UnpairedDocumentError(DeckforgeError):
    """Evaluation corpus entry without its document/reference counterpart."""


class PipelineStageError(DeckforgeError):
    """Error raised by a pipeline stage, annotated with the stage name."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {type(cause).__name__}: {cause}")
