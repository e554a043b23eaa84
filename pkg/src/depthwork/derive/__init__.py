"""Derivation certificates for the constructive rewriting lemmas."""

from .core import (
    CheckResult,
    Derivation,
    MapWord,
    PreconditionError,
    Step,
    check,
    empty_derivation,
    eval_word,
    rel,
)

__all__ = [
    "CheckResult",
    "Derivation",
    "MapWord",
    "PreconditionError",
    "Step",
    "check",
    "empty_derivation",
    "eval_word",
    "rel",
]
