"""Exception hierarchy shared across the engine."""


class MillstoneError(Exception):
    """Base class for all engine errors. ``code`` is the stable machine-readable name."""

    code = "Internal"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.context = context


class DimensionMismatch(MillstoneError):
    code = "DimensionMismatch"


class ZeroVector(MillstoneError):
    code = "ZeroVector"


class EmptyInput(MillstoneError):
    code = "EmptyInput"


class EmptyDocument(MillstoneError):
    code = "EmptyDocument"


class AllWordsFiltered(MillstoneError):
    code = "AllWordsFiltered"


class DuplicateId(MillstoneError):
    code = "DuplicateId"


class RemoteUnavailable(MillstoneError):
    code = "RemoteUnavailable"


class RemoteBadResponse(MillstoneError):
    code = "RemoteBadResponse"


class NotNormalized(MillstoneError):
    code = "NotNormalized"


class EmptyIndex(MillstoneError):
    code = "EmptyIndex"


class UnknownId(MillstoneError):
    code = "UnknownId"


class CorruptSnapshot(MillstoneError):
    code = "CorruptSnapshot"


class VersionMismatch(MillstoneError):
    code = "VersionMismatch"


class EmptyQuery(MillstoneError):
    code = "EmptyQuery"


class LockHeld(MillstoneError):
    code = "LockHeld"


class CorruptRecord(MillstoneError):
    code = "CorruptRecord"


class UnknownCorpus(MillstoneError):
    code = "UnknownCorpus"


class SourceUnreadable(MillstoneError):
    code = "SourceUnreadable"


class UnknownIndex(MillstoneError):
    code = "UnknownIndex"


class NotFound(MillstoneError):
    code = "NotFound"


class MissingEmbedding(MillstoneError):
    code = "MissingEmbedding"


class UnknownMetric(MillstoneError):
    code = "UnknownMetric"


class QuerySyntaxError(MillstoneError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at {line}:{col}", line=line, col=col)
        self.line = line
        self.col = col


class UnknownOperation(MillstoneError):
    code = "UnknownOperation"


class UnknownField(MillstoneError):
    code = "UnknownField"


class MissingVariable(MillstoneError):
    code = "MissingVariable"


class TypeMismatch(MillstoneError):
    code = "TypeMismatch"


class AuthError(MillstoneError):
    """Base for the 401 family."""

    code = "AuthError"


class MissingToken(AuthError):
    code = "MissingToken"


class BadSignature(AuthError):
    code = "BadSignature"


class Expired(AuthError):
    code = "Expired"
