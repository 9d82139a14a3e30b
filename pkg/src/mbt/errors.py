"""Exception types shared across the package."""

from __future__ import annotations


class MbtError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MbtError, ValueError):
    """Raised when input text does not match the expected grammar."""

    def __init__(self, message: str, position: int | None = None, expected: str | None = None):
        detail = message
        if position is not None:
            detail += f" at position {position}"
        if expected is not None:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class DomainError(MbtError, ValueError):
    """A term violates a domain restriction (degree, radicand mixing, state shape)."""


class UnknownRule(MbtError, KeyError):
    """A strategy refers to a rule identifier absent from the rule set."""

    def __init__(self, rule_id: str):
        super().__init__(rule_id)
        self.rule_id = rule_id

    def __str__(self) -> str:
        return f"unknown rule: {self.rule_id}"


class UnknownDomain(MbtError, KeyError):
    def __init__(self, domain_id: str):
        super().__init__(domain_id)
        self.domain_id = domain_id

    def __str__(self) -> str:
        return f"unknown domain: {self.domain_id}"


class BudgetExceeded(MbtError, RuntimeError):
    """Search exceeded its expansion or wall-clock budget."""


class CompletionStuck(MbtError, RuntimeError):
    """The correct strategy reached no final state from the given input."""


class AmbiguousCompletion(MbtError, RuntimeError):
    """Distinct maximal correct runs disagreed on the final answer."""


class ConfigMismatch(MbtError, ValueError):
    """Tables built under incompatible tasks or configurations cannot be merged."""


class FingerprintMismatch(MbtError, ValueError):
    """A persisted table does not match the requested rule set or configuration."""


class TableFileError(MbtError, IOError):
    """A persisted table file is unreadable or truncated."""


class VersionMismatch(TableFileError):
    """A persisted table file uses an unsupported format version."""
