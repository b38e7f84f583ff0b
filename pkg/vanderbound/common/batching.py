"""
batching.py
===========
State management for suite runs (progress, checkpoints, resume).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Optional, Sequence

from . import io

ISO_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"
RUN_SUFFIX_PATTERN = re.compile(r".*_\d{8}_\d{6}$")

STATUSES = ("pending", "done", "failed", "error")


def utc_now() -> str:
    """Return current UTC time string."""

    return datetime.now(timezone.utc).strftime(ISO_FORMAT)


def ensure_timestamp_suffix(label: str) -> str:
    """Ensure run id ends with `_YYYYMMDD_HHMMSS`."""

    base = (label or "suite").strip().replace(" ", "-")
    if RUN_SUFFIX_PATTERN.match(base):
        return base
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return f"{base}_{timestamp}"


@dataclass
class RunItem:
    """One suite instance."""

    instance_id: str
    payload: Dict[str, object]


class RunStateManager:
    """Manage suite run state and support resume via checkpoints.

    Timestamps live in progress/meta/checkpoint files only; the instance
    records themselves stay timestamp-free so reruns compare byte-for-byte.
    """

    def __init__(self, run_dir: Path):
        self.run_dir = Path(run_dir)
        self.checkpoint_dir = self.run_dir / "checkpoints"
        self.progress_path = self.run_dir / "progress.json"
        self.meta_path = self.run_dir / "meta.json"

    def exists(self) -> bool:
        return self.progress_path.exists()

    def ensure_structure(self) -> None:
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.checkpoint_dir.mkdir(parents=True, exist_ok=True)

    def init_progress(
        self,
        run_id: str,
        items: Sequence[RunItem],
        *,
        extra_meta: Optional[Dict[str, object]] = None,
    ) -> None:
        """Initialize progress.json/meta.json and per-instance checkpoints."""

        self.ensure_structure()
        instances = {item.instance_id: "pending" for item in items}
        totals = {status: 0 for status in STATUSES}
        totals["pending"] = len(instances)
        io.write_json(
            self.progress_path,
            {
                "run_id": run_id,
                "totals": totals,
                "instances": instances,
                "updated_at": utc_now(),
            },
        )

        meta: Dict[str, object] = {"run_id": run_id, "created_at": utc_now()}
        if extra_meta:
            meta.update(extra_meta)
        io.write_json(self.meta_path, meta)

        for item in items:
            self.write_checkpoint(
                item.instance_id,
                {"status": "pending", "payload": item.payload},
            )

    def load_meta(self) -> Dict[str, object]:
        return io.read_json(self.meta_path)

    def load_progress(self) -> Dict[str, object]:
        return io.read_json(self.progress_path)

    def update_status(self, instance_id: str, *, new_status: str) -> None:
        """Update an instance status and adjust aggregate counters."""

        if new_status not in STATUSES:
            raise ValueError(f"Unknown instance status: {new_status!r}")
        progress = self.load_progress()
        instances = progress["instances"]
        totals = progress["totals"]

        current = instances.get(instance_id)
        if current in totals:
            totals[current] = max(0, totals[current] - 1)
        totals[new_status] = totals.get(new_status, 0) + 1

        instances[instance_id] = new_status
        progress["updated_at"] = utc_now()
        io.write_json(self.progress_path, progress)

    def write_checkpoint(self, instance_id: str, payload: Dict[str, object]) -> None:
        path = self.checkpoint_dir / f"{instance_id}.json"
        io.write_json(path, {**payload, "updated_at": utc_now()})

    def read_checkpoint(self, instance_id: str) -> Dict[str, object]:
        """Read one checkpoint; return a default structure if missing."""

        path = self.checkpoint_dir / f"{instance_id}.json"
        if path.exists():
            return io.read_json(path)
        return {"status": "pending"}
