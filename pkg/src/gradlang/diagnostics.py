"""Source spans and the error taxonomy shared by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open region of source text, 1-based lines and columns."""

    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}-{self.end_line}:{self.end_col}"

    def covers(self, other: "Span") -> bool:
        if (other.line, other.col) < (self.line, self.col):
            return False
        return (other.end_line, other.end_col) <= (self.end_line, self.end_col)


DUMMY_SPAN = Span(0, 0, 0, 0)


class LangError(Exception):
    """Base class for all user-facing language errors."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is not None and self.span != DUMMY_SPAN:
            return f"{self.span}: {self.message}"
        return self.message


class ParseError(LangError):
    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message}; expected one of: {', '.join(sorted(set(expected)))}"
        super().__init__(message, span)
        self.expected = expected


class ScopeError(LangError):
    """A variable occurrence that is neither lexically bound nor a builtin."""


class KindError(LangError):
    """A surface type that is not well-kinded."""


class UnifyError(LangError):
    """Failure of consistent-equal unification.

    Subclasses mirror the failure modes of the algorithm; `span` is filled
    in by inference with the offending subterm once known.
    """

    def __init__(self, message: str, left: str = "", right: str = "", span: Span | None = None):
        super().__init__(message, span)
        self.left = left
        self.right = right

    def __str__(self) -> str:
        base = f"inconsistent types: {self.message}"
        if self.left or self.right:
            base = f"{base}: {self.left} ≃ {self.right}"
        if self.span is not None and self.span != DUMMY_SPAN:
            return f"{self.span}: {base}"
        return base


class ConstructorClash(UnifyError):
    pass


class MissingRowField(UnifyError):
    def __init__(self, label: str, left: str = "", right: str = "", span: Span | None = None):
        super().__init__(f"row lacks field '{label}'", left, right, span)
        self.label = label


class KindClash(UnifyError):
    pass


class OccursViolation(UnifyError):
    """Degenerate recursion: a binder reachable without crossing a constructor."""


class RuntimeTypeError(LangError):
    """A deferred dynamic check failed while evaluating.

    `span` points at the value that failed the check; `blame_span` points at
    the dynamically typed code that deferred the check in the first place.
    """

    def __init__(
        self,
        expected: str,
        actual: str,
        span: Span,
        blame_span: Span | None = None,
        message: str | None = None,
    ):
        if message is None:
            message = f"runtime type error: expected {expected}, got {actual}"
        super().__init__(message, span)
        self.expected = expected
        self.actual = actual
        self.blame_span = blame_span if blame_span is not None else span


class EvalError(LangError):
    """A non-type runtime failure (missing fixture, division by zero, ...)."""
