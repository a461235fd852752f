"""Exception hierarchy shared across the engine."""


class StorymixError(Exception):
    """Base class for all engine errors."""


class ScriptParseError(StorymixError):
    """A script document could not be parsed; carries a location hint."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ScriptValidationError(StorymixError):
    """A script violates a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid script")


class ConfigurationError(StorymixError):
    """A backend descriptor or registry entry is misconfigured."""


class TransportError(StorymixError):
    """A retryable transport-level failure (timeout, connection, 5xx)."""


class BackendUnavailableError(StorymixError):
    """All retry attempts against a backend transport failed."""


class ProtocolError(StorymixError):
    """A remote backend returned a malformed response."""


class IndexBuildError(StorymixError):
    """Voice index construction failed; names the offending entry."""


class CastingError(StorymixError):
    """The casting backend failed after retries."""


class LoopError(StorymixError):
    """A synthesis loop aborted mid-flight; carries completed attempts."""

    def __init__(self, message, attempts=()):
        super().__init__(message)
        self.attempts = list(attempts)


class RenderError(StorymixError):
    """The mixer could not render the script (e.g. missing asset)."""


class WavFormatError(StorymixError):
    """A WAV file is malformed or uses an unsupported encoding."""


class PreproductionError(StorymixError):
    """The text backend never produced a valid dialogue script."""

    def __init__(self, message, raw_response=None):
        super().__init__(message)
        self.raw_response = raw_response


class EditConflictError(StorymixError):
    """An edit was submitted against a stale script version."""


class ProjectError(StorymixError):
    """Project store corruption or unknown project."""
