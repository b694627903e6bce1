"""Exception types shared across the package."""


class ZeroeError(Exception):
    """Base class for all package errors."""


class SegmentOnTaggedError(ZeroeError):
    """Segment attack requested for a tagged (token/tag) corpus."""


class MissingResourceError(ZeroeError):
    """An attack needs a resource (dictionary, table) that is not configured."""


class CorpusParseError(ZeroeError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DelimiterCollisionError(ZeroeError):
    """A token contains the serialization delimiter; the file would not round-trip."""


class ZeroCleanScoreError(ZeroeError):
    pass


class MissingShieldedScoreError(ZeroeError):
    pass


class LengthMismatchError(ZeroeError):
    """Corpora that must be sample-aligned have different sample counts."""


class MisalignmentError(LengthMismatchError):
    pass


class ExcludedAttackerAbsentError(ZeroeError):
    pass


class DuplicateCodepointError(ZeroeError):
    pass


class TooFewGlyphsError(ZeroeError):
    pass


class EmptyWordError(ZeroeError):
    pass


class EmptySequenceError(ZeroeError):
    pass
