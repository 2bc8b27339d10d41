"""Exception hierarchy shared by every stage of the toolkit."""


class CodeMixError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(CodeMixError, ValueError):
    pass


class FormatError(CodeMixError, ValueError):
    """A malformed line in a TSV corpus or lexicon file."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        super().__init__(where + message)


class IoError(CodeMixError, OSError):
    pass


class DataError(CodeMixError, ValueError):
    pass


class ShapeError(CodeMixError, ValueError):
    pass


class VocabError(CodeMixError, IndexError):
    pass


class KindError(CodeMixError, TypeError):
    pass


class RoutingError(CodeMixError, ValueError):
    pass


class DegenerateError(CodeMixError, ZeroDivisionError):
    pass


class ConfigError(CodeMixError, ValueError):
    pass


class NumericalError(CodeMixError, FloatingPointError):
    """Raised when the training loss stops being finite.

    ``checkpoint`` holds the last parameters that produced a finite loss so
    callers can persist them before aborting.
    """

    def __init__(self, message, batch_id=None, checkpoint=None):
        self.batch_id = batch_id
        self.checkpoint = checkpoint
        super().__init__(message)


class StageError(CodeMixError):
    """Wraps an error raised inside one pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
