"""Seeded randomized certification suite.

Instance i draws from `numpy.random.default_rng([seed, i])`, so it does not
depend on the instance count and a resumed run reproduces it exactly. With a
run directory the suite keeps:

- `runs/<run_id>/{meta.json,progress.json,checkpoints/*.json}`
- `runs/<run_id>/instances.jsonl`: one record per instance, in instance order
- `runs/<run_id>/summary.json`: pass counts and worst ratios per check family
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from rich.progress import Progress

from ...common.batching import RunItem, RunStateManager
from ...common.dataset import nodeset_document
from ...common.io import dumps_json, loads_json, write_json, write_jsonl
from ...common.logging import get_logger
from ...common.settings import Settings
from ...core.errors import VanderboundError
from ...core.geometry import NodeSet
from ...core.multiindex import dimension
from ...core.vandermonde import analyze
from ..evaluation.metrics import summarize

logger = get_logger(__name__, stage="suite")

MAX_DRAWS = 10_000


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    count: int = 100
    s_range: Tuple[int, int] = (2, 5)
    n_range: Tuple[int, int] = (1, 3)
    degree_offsets: Tuple[int, ...] = (0,)
    min_separation: float = 0.0
    settings: Settings = field(default_factory=Settings)

    def validate(self) -> None:
        """Reject ranges outside the guardrails and degrees below s - 1."""

        g = self.settings.guardrails
        s_lo, s_hi = self.s_range
        n_lo, n_hi = self.n_range
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        if not 2 <= s_lo <= s_hi:
            raise ValueError(f"s range must satisfy 2 <= lo <= hi, got {self.s_range}")
        if not 1 <= n_lo <= n_hi:
            raise ValueError(f"n range must satisfy 1 <= lo <= hi, got {self.n_range}")
        if not self.degree_offsets:
            raise ValueError("at least one degree offset is required")
        if min(self.degree_offsets) < 0:
            raise ValueError(f"degree offsets must be >= 0 (N >= s - 1), got {self.degree_offsets}")
        if self.min_separation < 0:
            raise ValueError(f"min_separation must be >= 0, got {self.min_separation}")
        max_N = s_hi - 1 + max(self.degree_offsets)
        if s_hi > g.max_nodes or n_hi > g.max_dim or max_N > g.max_degree:
            raise ValueError(
                f"suite ranges exceed guardrails (s <= {g.max_nodes}, n <= {g.max_dim}, N <= {g.max_degree})"
            )
        if dimension(n_hi, max_N) > g.max_nu:
            raise ValueError(f"nu({n_hi}, {max_N}) exceeds max_nu = {g.max_nu}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "count": self.count,
            "s_range": list(self.s_range),
            "n_range": list(self.n_range),
            "degree_offsets": list(self.degree_offsets),
            "min_separation": self.min_separation,
            "settings": self.settings.to_dict(),
        }


def uniform_ball(rng: np.random.Generator, s: int, n: int) -> np.ndarray:
    """s points uniform in the unit ball: normalized Gaussian direction times U^(1/n)."""

    directions = rng.standard_normal((s, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(s) ** (1.0 / n)
    return directions * radii[:, None]


def _min_separation(points: np.ndarray) -> float:
    return min(float(np.linalg.norm(a - b)) for a, b in itertools.combinations(points, 2))


def draw_instance(seed: int, index: int, config: SuiteConfig) -> NodeSet:
    """Node set of instance `index`; redraws until distinct and separated."""

    rng = np.random.default_rng([seed, index])
    s = int(rng.integers(config.s_range[0], config.s_range[1] + 1))
    n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
    for _ in range(MAX_DRAWS):
        points = uniform_ball(rng, s, n)
        gap = _min_separation(points)
        if gap > 0.0 and gap >= config.min_separation:
            return NodeSet(points)
    raise ValueError(f"instance {index}: no node set with separation >= {config.min_separation} in {MAX_DRAWS} draws")


def instance_plan(config: SuiteConfig) -> List[Tuple[str, int, int]]:
    """(instance id, draw index, degree offset) in reduction order."""

    plan = []
    for i in range(config.count):
        for offset in config.degree_offsets:
            suffix = f"_o{offset}" if len(config.degree_offsets) > 1 else ""
            plan.append((f"i{i:05d}{suffix}", i, offset))
    return plan


def run_instance(instance_id: str, index: int, offset: int, config: SuiteConfig) -> Dict[str, Any]:
    """Analyze one instance; errors become records, never exceptions."""

    log = logger.bind(instance=instance_id)
    try:
        nodes = draw_instance(config.seed, index, config)
        N = nodes.s - 1 + offset
        report = analyze(nodes, N, config.settings)
    except (VanderboundError, ArithmeticError, ValueError) as exc:
        log.error("instance errored: %s", exc)
        return {"instance": instance_id, "status": "error", "error": f"{type(exc).__name__}: {exc}"}

    record = {
        "instance": instance_id,
        "status": "done" if report.all_pass else "failed",
        "s": nodes.s,
        "n": nodes.n,
        "N": N,
        "kappa_hat": report.global_.kappa_hat,
        "nodes": nodeset_document(nodes),
        "checks": [check.to_dict() for check in report.checks],
        "failures": report.failures,
    }
    if not report.all_pass:
        log.error("instance failed: %s", "; ".join(report.failures))
    return record


def run_suite(
    config: SuiteConfig,
    *,
    run_dir: Optional[Path] = None,
    run_id: Optional[str] = None,
    resume: bool = False,
    progress: Optional[Progress] = None,
    invocation: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Run every planned instance and return the summary (with config echo)."""

    config.validate()
    plan = instance_plan(config)
    manager: Optional[RunStateManager] = None
    if run_dir is not None:
        manager = RunStateManager(run_dir)
        if manager.exists() and not resume:
            raise FileExistsError(f"Run already exists: {run_dir} (pass --resume to continue, or choose a new --run-id)")
        if manager.exists() and manager.load_meta().get("config") != loads_json(dumps_json(config.to_dict())):
            raise ValueError(f"Run {run_dir} was started with a different suite configuration")
        if not manager.exists():
            manager.init_progress(
                run_id or Path(run_dir).name,
                [RunItem(instance_id=iid, payload={"index": i, "offset": o}) for iid, i, o in plan],
                extra_meta={"config": config.to_dict(), **({"invocation": invocation} if invocation else {})},
            )

    task = progress.add_task("certification suite", total=len(plan)) if progress is not None else None
    records: List[Dict[str, Any]] = []
    for instance_id, index, offset in plan:
        record: Optional[Dict[str, Any]] = None
        if manager is not None:
            checkpoint = manager.read_checkpoint(instance_id)
            if checkpoint.get("status") in ("done", "failed", "error") and "record" in checkpoint:
                record = checkpoint["record"]
        if record is None:
            record = run_instance(instance_id, index, offset, config)
            if manager is not None:
                manager.write_checkpoint(instance_id, {"status": record["status"], "record": record})
                manager.update_status(instance_id, new_status=record["status"])
        records.append(record)
        if task is not None:
            progress.advance(task)

    summary = {"config": config.to_dict(), **summarize(records).to_dict()}
    if run_dir is not None:
        write_jsonl(Path(run_dir) / "instances.jsonl", records)
        write_json(Path(run_dir) / "summary.json", summary)
    logger.info(
        "suite complete: %s instances, %s passed, %s failed, %s errors",
        summary["instances"],
        summary["passed"],
        summary["failed"],
        summary["errors"],
    )
    return summary
