"""Exception types shared across the engine.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can map failures to exit codes and response statuses without
matching on message text.
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "ENGINE"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationError(EngineError):
    """Caller supplied arguments that violate an operation's contract."""

    code = "VALIDATION"


class OutOfVocabularyError(ValidationError):
    """None of the supplied terms exist in the model vocabulary."""

    code = "OOV_TERM"

    def __init__(self, missing: list[str]):
        super().__init__(
            "terms not in vocabulary: " + ", ".join(sorted(missing)),
            details={"missing": sorted(missing)},
        )
        self.missing = sorted(missing)


class EmptyVocabularyError(ValidationError):
    """No token in the corpus meets the frequency threshold."""

    code = "EMPTY_VOCABULARY"


class NotFoundError(EngineError):
    """A named resource (document, lexicon, sub-corpus) does not exist."""

    code = "NOT_FOUND"


class ConflictError(EngineError):
    """A named resource already exists."""

    code = "CONFLICT"


class VersionConflictError(ConflictError):
    """Optimistic-concurrency check failed: the resource changed underneath
    the caller."""

    code = "VERSION_CONFLICT"

    def __init__(self, message: str, current_version: int):
        super().__init__(message, details={"current_version": current_version})
        self.current_version = current_version


class IngestError(EngineError):
    """Fatal corpus-ingest failure (missing metadata, duplicate doc_id)."""

    code = "INGEST"


class ParseError(EngineError):
    """A persisted file (model, lexicon, index snapshot) is malformed."""

    code = "PARSE"

    def __init__(self, message: str, line: int | None = None):
        details = {"line": line} if line is not None else {}
        super().__init__(message if line is None else f"line {line}: {message}", details)
        self.line = line
