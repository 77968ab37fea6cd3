"""Exception types shared across the package.

Every error carries a stable machine-readable ``code`` (used verbatim by the
HTTP layer) so callers never have to match on message text.
"""


class SketchletError(Exception):
    code = "InternalError"


# vertical-format parsing

class MalformedLine(SketchletError):
    code = "MalformedLine"

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class UnclosedStructure(SketchletError):
    code = "UnclosedStructure"


class UnknownEnumValue(SketchletError):
    code = "UnknownEnumValue"


class DuplicateDocId(SketchletError):
    code = "DuplicateDocId"


# index / filters / subcorpora

class UnknownAttribute(SketchletError):
    code = "UnknownAttribute"


class InvalidRegex(SketchletError):
    code = "InvalidRegex"


class DuplicateName(SketchletError):
    code = "DuplicateName"


class UnknownSubcorpus(SketchletError):
    code = "UnknownSubcorpus"


class IndexFormatError(SketchletError):
    code = "IndexFormatError"


class VersionMismatch(IndexFormatError):
    code = "VersionMismatch"


# query language

class QuerySyntaxError(SketchletError):
    """Raised on malformed query text; ``position`` is a 0-based char offset."""

    code = "SyntaxError"

    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class CorpusTooLarge(SketchletError):
    code = "CorpusTooLarge"


# sketches

class MissingSlotLabel(SketchletError):
    code = "MissingSlotLabel"


class DuplicateRelation(SketchletError):
    code = "DuplicateRelation"


class BadMode(SketchletError):
    code = "BadMode"


class DomainError(SketchletError):
    code = "DomainError"


# word lists

class EmptyScope(SketchletError):
    code = "EmptyScope"


# service

class NoCorpusLoaded(SketchletError):
    code = "NoCorpusLoaded"
