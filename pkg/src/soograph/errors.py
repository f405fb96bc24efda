"""Exception types shared across the engine."""

from __future__ import annotations


class SoographError(Exception):
    """Base class for all engine errors."""


class NotFoundError(SoographError):
    """A document, library, or other named record does not exist."""

    def __init__(self, kind: str, key: str):
        super().__init__(f"{kind} not found: {key}")
        self.kind = kind
        self.key = key


class ParseError(SoographError):
    """Query syntax error. Carries the byte offset into the input and the
    token kinds that would have been accepted there."""

    def __init__(self, message: str, offset: int, expected: set[str] | None = None):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset
        self.expected = expected or set()


class UnknownFieldError(ParseError):
    def __init__(self, field: str, offset: int):
        super().__init__(f"unknown field: {field}", offset)
        self.field = field


class UnsupportedFieldError(ParseError):
    """Field exists in the source system but is deliberately not supported
    here (currently only ``object:``)."""

    def __init__(self, field: str, offset: int):
        ParseError.__init__(self, f"unsupported field: {field}", offset)
        self.field = field


class InvalidArgumentError(SoographError):
    """An operator argument is outside its documented domain."""


class EvaluationError(SoographError):
    """A structurally valid query failed during evaluation."""
