"""Exception hierarchy for vanderbound.

Inequality verdicts are data (see `checks.BoundCheck`); the classes here cover
contract violations and input problems only.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union


class VanderboundError(Exception):
    """Base class for every error raised by vanderbound itself."""


class ContractViolation(VanderboundError, ValueError):
    """A documented precondition does not hold."""


class DegreeError(ContractViolation):
    """Degree N is below s - 1, or a univariate factor exceeds the order degree."""


class InvalidNodeSetError(VanderboundError, ValueError):
    def __init__(self, message: str, *, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class StaleCertificateError(VanderboundError, ValueError):
    """A direction certificate does not reproduce its gap on the node set."""


class DimensionOverflowError(VanderboundError, OverflowError):
    pass


class ConvergenceError(VanderboundError, ArithmeticError):
    pass


class GuardrailError(VanderboundError, ValueError):
    """Instance exceeds the configured desk-scale limits."""


class NodeSetParseError(VanderboundError, ValueError):
    def __init__(
        self,
        message: str,
        *,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.path = path
        self.line = line
        self.field = field


class StageError(VanderboundError):
    """Wraps an error raised inside a named analysis stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
