"""Exception types shared across the package."""


class CommentLensError(Exception):
    """Base class; carries a machine-readable code for CLI/API reporting."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ConfigError(CommentLensError):
    code = "config_invalid"


class CredentialError(CommentLensError):
    code = "credential_invalid"


class QuotaExhaustedError(CommentLensError):
    """API quota ran out; the fetch persisted a resume cursor."""

    code = "quota_exhausted"


class ChannelNotFoundError(CommentLensError):
    code = "channel_not_found"


class VideoNotFoundError(CommentLensError):
    code = "video_not_found"


class MalformedBundleError(CommentLensError):
    code = "malformed_bundle"


class IntegrityError(CommentLensError):
    code = "integrity_violation"


class InvalidPageError(CommentLensError):
    code = "invalid_page"


class PublishInProgressError(CommentLensError):
    code = "publish_in_progress"


class IngestLockedError(CommentLensError):
    code = "ingest_locked"


class ModelUnavailableError(CommentLensError):
    code = "model_unavailable"


class LLMOutputError(CommentLensError):
    """Structured output could not be parsed after the allowed re-ask."""

    code = "llm_output_invalid"


class DependencyError(CommentLensError):
    code = "dependency_missing"


class IngestEmptyError(CommentLensError):
    code = "ingest_empty"
