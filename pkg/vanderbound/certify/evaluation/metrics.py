"""Suite aggregation: pass counts and worst bound ratios per check family.

A ratio is actual/bound for upper bounds and bound/actual for lower bounds,
so a value <= 1 means the inequality held; the worst ratio of a family is the
one closest to (or past) its bound.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Optional

from ...core.checks import BoundCheck


@dataclass(frozen=True)
class FamilyStats:
    checks: int
    passed: int
    worst_ratio: float
    worst_instance: Optional[str]


@dataclass(frozen=True)
class SuiteSummary:
    instances: int
    passed: int
    failed: int
    errors: int
    families: Dict[str, FamilyStats]
    failed_instances: List[str]
    error_instances: List[str]

    @property
    def all_pass(self) -> bool:
        return self.failed == 0 and self.errors == 0

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["all_pass"] = self.all_pass
        return out


def check_ratio(check: Dict[str, Any]) -> float:
    """Ratio of a serialized check (slack does not enter the ratio)."""

    return BoundCheck(
        name=str(check["name"]),
        family=str(check["family"]),
        actual=check["actual"],
        bound=check["bound"],
        relation=str(check["relation"]),
    ).ratio


def summarize(records: Iterable[Dict[str, Any]]) -> SuiteSummary:
    """Ordered reduction over instance records.

    Each record carries `instance`, `status` ("done" / "failed" / "error") and,
    unless it errored, the serialized `checks` of its report. Ties on the worst
    ratio keep the earlier instance.
    """

    instances = passed = failed = errors = 0
    failed_ids: List[str] = []
    error_ids: List[str] = []
    counts: Dict[str, List[int]] = {}
    worst: Dict[str, float] = {}
    worst_at: Dict[str, Optional[str]] = {}

    for record in records:
        instances += 1
        instance_id = str(record.get("instance"))
        status = record.get("status")
        if status == "error":
            errors += 1
            error_ids.append(instance_id)
            continue
        if status == "done":
            passed += 1
        else:
            failed += 1
            failed_ids.append(instance_id)

        for check in record.get("checks") or []:
            family = str(check["family"])
            tally = counts.setdefault(family, [0, 0])
            tally[0] += 1
            tally[1] += int(bool(check["passed"]))
            ratio = check_ratio(check)
            if family not in worst or ratio > worst[family]:
                worst[family] = ratio
                worst_at[family] = instance_id

    families = {
        family: FamilyStats(checks=counts[family][0], passed=counts[family][1], worst_ratio=worst[family], worst_instance=worst_at[family])
        for family in sorted(counts)
    }
    return SuiteSummary(
        instances=instances,
        passed=passed,
        failed=failed,
        errors=errors,
        families=families,
        failed_instances=failed_ids,
        error_instances=error_ids,
    )
