"""Exception types shared across the engine."""


class WebSentinelError(Exception):
    """Base class for all engine errors."""

    code = "internal_error"


class MalformedUrl(WebSentinelError):
    code = "malformed_url"


class UnsupportedScheme(WebSentinelError):
    code = "unsupported_scheme"


class ProviderTimeout(WebSentinelError):
    """Raised by metadata providers; callers degrade, never propagate."""

    code = "provider_timeout"


class SessionClosed(WebSentinelError):
    code = "session_closed"


class InvalidConfig(WebSentinelError):
    code = "invalid_config"


class SchemaError(WebSentinelError):
    code = "schema_error"


class ParseError(WebSentinelError):
    code = "parse_error"


class DimensionMismatch(WebSentinelError):
    code = "dimension_mismatch"


class InvalidWeights(WebSentinelError):
    code = "invalid_weights"


class InvalidScore(WebSentinelError):
    code = "invalid_score"


class DegenerateBaseRate(WebSentinelError):
    code = "degenerate_base_rate"


class IoError(WebSentinelError):
    code = "io_error"


class CorruptJournal(WebSentinelError):
    """Carries the 1-based line number of the offending journal record."""

    code = "corrupt_journal"

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
