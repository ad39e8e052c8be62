"""Exception hierarchy shared by all pipeline stages."""


class TopicFlowError(Exception):
    """Base class for all package errors."""


class ParameterError(TopicFlowError, ValueError):
    """An argument is outside its documented range."""


class InputFormatError(TopicFlowError):
    """Input data is unusable (too many malformed records, empty matrix)."""


class NumericError(TopicFlowError, FloatingPointError):
    """Non-finite values appeared during a numerical routine."""


class StageError(TopicFlowError):
    """Wraps a fatal error with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
