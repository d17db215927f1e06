"""Exception types shared across the toolkit."""


class HintkitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(HintkitError):
    """A record or value violates a schema invariant.

    ``field`` names the offending attribute so callers can report it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class RecordParseError(HintkitError):
    """A JSONL line could not be decoded. Carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class TransportError(HintkitError):
    """A remote call failed after exhausting retries."""


class FixtureMissingError(HintkitError):
    """Offline mode was asked for a digest the fixture does not contain."""

    def __init__(self, digest: str, kind: str = ""):
        self.digest = digest
        self.kind = kind
        detail = f" ({kind})" if kind else ""
        super().__init__(f"no fixture entry for digest {digest}{detail}")


class ArticleMissingError(HintkitError):
    """The pageview API has no article under the requested title."""

    def __init__(self, title: str):
        self.title = title
        super().__init__(f"no such article: {title!r}")


class GenerationError(HintkitError):
    """A provider response could not be parsed into the expected structure."""


class ClassificationError(HintkitError):
    """A question-type classifier produced unusable output."""


class JudgementError(HintkitError):
    """A candidate judgement was neither Yes nor No after retrying."""


class UndefinedCorrelationError(HintkitError):
    """Pearson correlation is undefined (zero variance or too few points)."""


class ConfigError(HintkitError):
    """A pipeline configuration file or value is invalid."""


class ProtocolViolationError(HintkitError):
    """An annotation-session action arrived out of order (HTTP 409)."""


class UnknownResourceError(HintkitError):
    """A session, question, or hint id does not exist (HTTP 404)."""
