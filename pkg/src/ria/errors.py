"""
Error types for RealAlign.

Every library error carries a short, machine-friendly ``reason_code`` so the
CLI, the sweep runner and the event log can report failures without parsing
messages. Each concrete error also derives from the closest builtin exception
so generic callers can keep catching ``ValueError`` or ``KeyError``.
"""

from __future__ import annotations

from typing import Optional


class AlignmentSimError(Exception):
    """Base class for all RealAlign errors."""

    reason_code = "alignment_sim_error"

    def __init__(self, message: str, *, reason_code: Optional[str] = None) -> None:
        super().__init__(message)
        if reason_code:
            self.reason_code = reason_code

    def __str__(self) -> str:
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else self.reason_code


class InvalidDims(AlignmentSimError, ValueError):
    reason_code = "invalid_dims"


class CapExceeded(AlignmentSimError, ValueError):
    reason_code = "cap_exceeded"


class Degenerate(AlignmentSimError, ValueError):
    reason_code = "degenerate"


class InvalidDistribution(AlignmentSimError, ValueError):
    reason_code = "invalid_distribution"


class UnknownGain(AlignmentSimError, KeyError):
    reason_code = "unknown_gain"


class DivisionDegenerate(AlignmentSimError, ZeroDivisionError):
    reason_code = "division_degenerate"


class DegreeMismatch(AlignmentSimError, ValueError):
    reason_code = "degree_mismatch"


class IntegerOverflow(AlignmentSimError, OverflowError):
    reason_code = "integer_overflow"


class InvalidSpec(AlignmentSimError, ValueError):
    reason_code = "invalid_spec"


class SymbolOutOfRange(AlignmentSimError, ValueError):
    reason_code = "symbol_out_of_range"


class ConfigError(AlignmentSimError, ValueError):
    reason_code = "config_error"


def reason_code_of(exc: BaseException) -> str:
    """
    Return the reason code for any exception.

    Foreign exceptions map to ``runner_error:<TypeName>``.
    """
    if isinstance(exc, AlignmentSimError):
        return exc.reason_code
    return f"runner_error:{type(exc).__name__}"


__all__ = [
    "AlignmentSimError",
    "InvalidDims",
    "CapExceeded",
    "Degenerate",
    "InvalidDistribution",
    "UnknownGain",
    "DivisionDegenerate",
    "DegreeMismatch",
    "IntegerOverflow",
    "InvalidSpec",
    "SymbolOutOfRange",
    "ConfigError",
    "reason_code_of",
]
