"""Exception hierarchy shared by every gbw module."""


class GbwError(Exception):
    """Base class for all errors raised by gbw."""


class InputFormatError(GbwError):
    """Malformed text or alignment input.

    ``line`` is the 1-based line number when the error comes from a file.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class AlignmentError(InputFormatError):
    """An alignment link that violates the bitext model."""


class AlignmentBoundsError(AlignmentError):
    pass


class OneToManyError(AlignmentError):
    """A right word linked to two different left words."""


class LineCountMismatch(InputFormatError):
    pass


class CorruptSequenceError(GbwError):
    """A biword sequence that cannot be restored to a text."""


class SchemeError(GbwError):
    """A biword sequence that does not fit the requested extraction scheme."""


class CodecError(GbwError):
    """Malformed or truncated entropy-coded stream."""


class CorruptArchiveError(GbwError):
    pass
