"""Error taxonomy shared across the engine, CLI, and HTTP API.

Every error carries a stable machine-readable ``code`` so API clients can
branch on it without parsing messages.
"""

from __future__ import annotations


class ReelsmithError(Exception):
    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class ValidationError(ReelsmithError):
    code = "validation_error"


class ParseFailure(ReelsmithError):
    code = "parse_failure"


class ProviderUnavailable(ReelsmithError):
    code = "provider_unavailable"


class CassetteMiss(ReelsmithError):
    code = "cassette_miss"


class EmptyCompletion(ReelsmithError):
    code = "empty_completion"


class NotFound(ReelsmithError):
    code = "not_found"


class StorageCorrupt(ReelsmithError):
    code = "storage_corrupt"


class StageViolation(ReelsmithError):
    code = "stage_violation"


class UnknownScript(ReelsmithError):
    code = "unknown_script"


class UnknownSpeaker(ReelsmithError):
    code = "unknown_speaker"


class Degenerate(ReelsmithError):
    code = "degenerate"


class IOFailure(ReelsmithError):
    code = "io_failure"
