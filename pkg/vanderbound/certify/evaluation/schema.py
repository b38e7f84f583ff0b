"""Stability report emission, parsing, validation and table rendering."""

from __future__ import annotations

from dataclasses import fields
from typing import Any, Dict, List, Tuple, Union

from rich.console import Console
from rich.table import Table

from ...common.io import dumps_json, loads_json
from ...core.vandermonde import GlobalRecord, InterpolantRecord, NodeRecord, StabilityReport

REPORT_TOP_KEYS = {"config", "per_node", "global", "checks", "failures", "all_pass"}
OPTIONAL_TOP_KEYS = {"interpolant"}
NODE_KEYS = {f.name for f in fields(NodeRecord)}
GLOBAL_KEYS = {f.name for f in fields(GlobalRecord)}
INTERPOLANT_KEYS = {f.name for f in fields(InterpolantRecord)}
CHECK_KEYS = {"name", "family", "actual", "relation", "bound", "passed"}

INT_KEYS = {"j", "s", "n", "N", "nu", "rank", "full_rank_expected", "kernel_dim"}
BOOL_KEYS = {"exact", "kappa_exact", "all_pass"}
STR_KEYS = {"method"}

ReportLike = Union[StabilityReport, Dict[str, Any]]


def _as_dict(report: ReportLike) -> Dict[str, Any]:
    return report.to_dict() if isinstance(report, StabilityReport) else report


def emit_report(report: ReportLike) -> str:
    """Strict JSON text of a report: indent 2, shortest round-trip floats, no timestamps."""

    return dumps_json(_as_dict(report))


def parse_report(text: str) -> Dict[str, Any]:
    obj = loads_json(text)
    if not isinstance(obj, dict):
        raise ValueError("report must be a JSON object")
    return obj


def _require_keys(obj: Dict[str, Any], required: set[str], *, optional: set[str] = frozenset(), strict: bool) -> List[str]:
    errors: List[str] = []
    missing = required - set(obj.keys())
    if missing:
        errors.append(f"missing_keys: {sorted(missing)}")
    if strict:
        extra = set(obj.keys()) - required - optional
        if extra:
            errors.append(f"extra_keys: {sorted(extra)}")
    return errors


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _check_record_types(obj: Dict[str, Any], *, prefix: str) -> List[str]:
    errors: List[str] = []
    for key, value in obj.items():
        if key in BOOL_KEYS:
            ok = isinstance(value, bool)
        elif key in INT_KEYS:
            ok = isinstance(value, int) and not isinstance(value, bool)
        elif key in STR_KEYS:
            ok = isinstance(value, str)
        elif isinstance(value, list):
            ok = all(_is_number(x) for x in value)
        else:
            ok = _is_number(value)
        if not ok:
            errors.append(f"{prefix}{key}_type_error")
    return errors


def validate_report(obj: Any, *, strict: bool = True) -> Tuple[bool, List[str]]:
    """Validate the report layout and field types.

    Also checks that `all_pass` agrees with the check verdicts and rank.
    """

    if not isinstance(obj, dict):
        return False, ["top_level_not_object"]
    errors = _require_keys(obj, REPORT_TOP_KEYS, optional=OPTIONAL_TOP_KEYS, strict=strict)

    if not isinstance(obj.get("config"), dict):
        errors.append("config_not_object")

    per_node = obj.get("per_node")
    if not isinstance(per_node, list):
        errors.append("per_node_not_list")
        per_node = []
    for i, record in enumerate(per_node):
        if not isinstance(record, dict):
            errors.append(f"per_node[{i}]_not_object")
            continue
        errors.extend(f"per_node[{i}].{e}" for e in _require_keys(record, NODE_KEYS, strict=strict))
        errors.extend(_check_record_types(record, prefix=f"per_node[{i}]."))
        if record.get("j") != i:
            errors.append(f"per_node[{i}].j_out_of_order")

    glob = obj.get("global")
    if not isinstance(glob, dict):
        errors.append("global_not_object")
        glob = {}
    else:
        errors.extend(f"global.{e}" for e in _require_keys(glob, GLOBAL_KEYS, strict=strict))
        errors.extend(_check_record_types(glob, prefix="global."))
        if isinstance(glob.get("s"), int) and len(per_node) != glob["s"]:
            errors.append("per_node_length_not_s")

    interp = obj.get("interpolant")
    if interp is not None:
        if not isinstance(interp, dict):
            errors.append("interpolant_not_object")
        else:
            errors.extend(f"interpolant.{e}" for e in _require_keys(interp, INTERPOLANT_KEYS, strict=strict))
            errors.extend(_check_record_types(interp, prefix="interpolant."))

    checks = obj.get("checks")
    if not isinstance(checks, list):
        errors.append("checks_not_list")
        checks = []
    for i, check in enumerate(checks):
        if not isinstance(check, dict):
            errors.append(f"checks[{i}]_not_object")
            continue
        errors.extend(f"checks[{i}].{e}" for e in _require_keys(check, CHECK_KEYS, strict=strict))
        if not isinstance(check.get("passed"), bool):
            errors.append(f"checks[{i}].passed_not_bool")

    failures = obj.get("failures")
    if not isinstance(failures, list) or any(not isinstance(x, str) for x in failures):
        errors.append("failures_not_list_of_str")

    all_pass = obj.get("all_pass")
    if not isinstance(all_pass, bool):
        errors.append("all_pass_not_bool")
    elif checks and glob:
        expected = all(c.get("passed") is True for c in checks if isinstance(c, dict)) and glob.get("rank") == glob.get("s")
        if expected != all_pass or glob.get("all_pass") != all_pass:
            errors.append("all_pass_inconsistent")

    return (not errors), errors


def _fmt(x: Any) -> str:
    if isinstance(x, bool) or not isinstance(x, float):
        return str(x)
    return f"{x:.6g}"


def build_tables(report: ReportLike) -> List[Table]:
    """Per-node table, global bound table, and failing checks (if any)."""

    obj = _as_dict(report)
    glob = obj["global"]

    nodes = Table(title="per node")
    for col in ("j", "delta_j", "exact", "dist_actual", "dist_bound", "sin_theta_actual", "sin_theta_bound", "qj_norm", "qj_bound"):
        nodes.add_column(col, justify="right")
    for r in obj["per_node"]:
        nodes.add_row(
            *(_fmt(r[k]) for k in ("j", "delta_j", "exact", "dist_actual", "dist_bound", "sin_theta_actual", "sin_theta_bound", "qj_norm", "qj_bound"))
        )

    bounds = Table(title=f"global (s={glob['s']}, n={glob['n']}, N={glob['N']}, nu={glob['nu']})")
    bounds.add_column("quantity")
    bounds.add_column("actual", justify="right")
    bounds.add_column("bound", justify="right")
    for label, actual, bound in (
        ("kappa_hat", "kappa_hat", None),
        ("sigma_min", "sigma_min_actual", "sigma_min_bound"),
        ("sigma_max", "sigma_max_actual", "sigma_max_bound"),
        ("|V+|", "rinv_norm_actual", "rinv_norm_bound"),
        ("cond", "cond_actual", "cond_bound"),
        ("rank", "rank", "full_rank_expected"),
    ):
        bounds.add_row(label, _fmt(glob[actual]), _fmt(glob[bound]) if bound else "")

    tables = [nodes, bounds]
    if obj["failures"]:
        failed = Table(title="failed checks")
        failed.add_column("check")
        for line in obj["failures"]:
            failed.add_row(line)
        tables.append(failed)
    return tables


def render_table(report: ReportLike, *, width: int = 120) -> str:
    """Plain-text rendering of the report tables."""

    obj = _as_dict(report)
    console = Console(width=width, force_terminal=False, color_system=None)
    with console.capture() as capture:
        for table in build_tables(obj):
            console.print(table)
        console.print(f"all_pass: {obj['all_pass']}")
    return capture.get()
