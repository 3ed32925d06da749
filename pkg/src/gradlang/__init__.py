"""Gradually typed functional core language with contract combinators."""

from .diagnostics import (
    ConstructorClash,
    EvalError,
    KindClash,
    KindError,
    LangError,
    MissingRowField,
    OccursViolation,
    ParseError,
    RuntimeTypeError,
    ScopeError,
    Span,
    UnifyError,
)
from .infer import (
    Inference,
    InferOutcome,
    Scheme,
    TypeEnv,
    annotate_dynamic_by_default,
    generalize,
    instantiate,
)
from .session import Session
from .syntax import parse_term, parse_type, pretty_term, pretty_type, scope_check
from .typegraph import TypeStore, copy_dyn, intern, kind_check, resolve
from .unify import consistent_oracle, maybe_copy_dyns, unify

__all__ = [
    "ConstructorClash",
    "EvalError",
    "Inference",
    "InferOutcome",
    "KindClash",
    "KindError",
    "LangError",
    "MissingRowField",
    "OccursViolation",
    "ParseError",
    "RuntimeTypeError",
    "Scheme",
    "ScopeError",
    "Session",
    "Span",
    "TypeEnv",
    "TypeStore",
    "UnifyError",
    "annotate_dynamic_by_default",
    "consistent_oracle",
    "copy_dyn",
    "generalize",
    "instantiate",
    "intern",
    "kind_check",
    "maybe_copy_dyns",
    "parse_term",
    "parse_type",
    "pretty_term",
    "pretty_type",
    "resolve",
    "scope_check",
    "unify",
]
