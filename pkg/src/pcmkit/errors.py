"""Exception types shared by every module."""


class PcmError(Exception):
    """Base class for errors raised by pcmkit."""


class InvalidArgument(PcmError, ValueError):
    """A parameter is outside the range an operation accepts."""


class DegenerateSignal(PcmError, ValueError):
    """The signal has no energy where energy is needed (silence, zero power)."""


class MissingData(PcmError, LookupError):
    """An operation needs user supplied data that was not given."""


class ParseError(PcmError, ValueError):
    """Malformed text or binary input.

    ``line``/``column`` are 1-based and set for text formats,
    ``offset`` is a byte offset and set for binary formats.
    """

    def __init__(self, message, line=None, column=None, offset=None):
        self.line = line
        self.column = column
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if offset is not None:
            where.append(f"byte {offset}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class EventError(PcmError):
    """Rendering a single score event failed; ``index`` names the event."""

    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        super().__init__(f"event {index}: {cause}")
