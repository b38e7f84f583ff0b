"""Bound checks: one inequality, both of its sides, and the verdict."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List

RELATIONS = ("<=", ">=", "==")

FAMILIES = (
    "coefficient",
    "distance",
    "angle",
    "sigma_min",
    "sigma_max",
    "right_inverse",
    "condition",
    "rank",
    "kernel",
    "kronecker",
    "interpolant",
    "univariate",
    "sigma_relation",
)


@dataclass(frozen=True)
class BoundCheck:
    """`actual RELATION bound`, with relative slack on the bound side.

    `passed` tolerates `slack_rel * |bound| + slack_abs`; an actual value that
    is not finite never passes. `ratio` is actual/bound for "<=" and
    bound/actual for ">="; a value <= 1 means the inequality holds with that
    much margin.
    """

    name: str
    family: str
    actual: float
    bound: float
    relation: str = "<="
    slack_rel: float = 1e-9
    slack_abs: float = 0.0

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"Unknown relation {self.relation!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"Unknown check family {self.family!r}")
        object.__setattr__(self, "actual", float(self.actual))
        object.__setattr__(self, "bound", float(self.bound))

    @property
    def allowance(self) -> float:
        relative = self.slack_rel * abs(self.bound) if self.slack_rel else 0.0
        return relative + self.slack_abs

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.actual) or math.isnan(self.bound):
            return False
        if self.relation == "<=":
            return self.actual <= self.bound + self.allowance
        if self.relation == ">=":
            return self.actual >= self.bound - self.allowance
        return abs(self.actual - self.bound) <= self.allowance

    @property
    def ratio(self) -> float:
        if self.relation == "<=":
            num, den = self.actual, self.bound
        elif self.relation == ">=":
            num, den = self.bound, self.actual
        else:
            return 1.0 if self.actual == self.bound else math.inf
        if den == 0:
            return 0.0 if num == 0 else math.inf
        return num / den

    def describe(self) -> str:
        return f"{self.name}: {self.actual!r} {self.relation} {self.bound!r}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "family": self.family,
            "actual": self.actual,
            "relation": self.relation,
            "bound": self.bound,
            "passed": self.passed,
        }


def failures(checks: Iterable[BoundCheck]) -> List[str]:
    return [check.describe() for check in checks if not check.passed]


def bound_power(base: float, exponent: int) -> float:
    """base ** exponent for a non-negative base; inf once it leaves the float range."""

    try:
        return float(base) ** exponent
    except OverflowError:
        return math.inf
