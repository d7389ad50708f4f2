"""Typechecker, evaluator and runtime for a linear contextual-modal calculus with sessions."""

from ._core import (
    ParseError,
    TypeError,
    check,
    dual,
    eval,
    pretty_program,
    pretty_term,
    pretty_type,
    run,
    type_equiv,
)

__all__ = [
    "ParseError",
    "TypeError",
    "check",
    "dual",
    "eval",
    "pretty_program",
    "pretty_term",
    "pretty_type",
    "run",
    "type_equiv",
]
