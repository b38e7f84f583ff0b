"""Single node set -> stability report.

Outputs (when `output` is set) are written atomically; the report carries a
config echo so it can be regenerated byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from ...common.dataset import load_nodeset
from ...common.io import write_text
from ...common.logging import get_logger
from ...common.settings import Settings, load_settings
from ...core.errors import DegreeError
from ...core.vandermonde import StabilityReport, analyze
from ..evaluation.schema import emit_report, render_table

logger = get_logger(__name__, stage="analyze")

FORMATS = ("json", "table")


@dataclass(frozen=True)
class AnalyzeConfig:
    input_path: Path
    degree: Union[int, str] = "auto"
    seed: Optional[int] = None
    budget: Optional[int] = None
    max_nu: Optional[int] = None
    output: Optional[Path] = None
    fmt: str = "json"
    settings_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.fmt not in FORMATS:
            raise ValueError(f"Unknown output format {self.fmt!r}; expected one of {FORMATS}.")
        if isinstance(self.degree, str) and self.degree != "auto":
            raise ValueError(f"degree must be an integer or 'auto', got {self.degree!r}.")


def parse_degree(value: str) -> Union[int, str]:
    """argparse type for `--degree N|auto`."""

    if value == "auto":
        return value
    try:
        degree = int(value)
    except ValueError:
        raise ValueError(f"degree must be an integer or 'auto', got {value!r}") from None
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    return degree


def effective_settings(
    settings: Settings,
    *,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    max_nu: Optional[int] = None,
) -> Settings:
    """CLI flags override file and environment settings."""

    search = settings.search
    if seed is not None:
        search = replace(search, seed=seed)
    if budget is not None:
        search = replace(search, budget=budget)
    guardrails = settings.guardrails if max_nu is None else replace(settings.guardrails, max_nu=max_nu)
    return replace(settings, search=search, guardrails=guardrails)


def resolve_degree(degree: Union[int, str], s: int) -> int:
    N = s - 1 if degree == "auto" else int(degree)
    if N < s - 1:
        raise DegreeError(f"degree N = {N} is below s - 1 = {s - 1} for {s} nodes")
    return N


def run_analyze(config: AnalyzeConfig, *, settings: Optional[Settings] = None) -> Tuple[int, StabilityReport, str]:
    """Analyze one document; returns (exit code, report, rendered output).

    Exit code 0 iff every certificate passed. Input problems raise.
    """

    base = settings if settings is not None else load_settings(config.settings_path)
    settings = effective_settings(base, seed=config.seed, budget=config.budget, max_nu=config.max_nu)
    document = load_nodeset(config.input_path, norm_tol=settings.tolerances.node_norm)
    nodes = document.nodes
    N = resolve_degree(config.degree, nodes.s)

    log = logger.bind(instance=Path(config.input_path).name)
    log.info("s=%s n=%s N=%s seed=%s budget=%s", nodes.s, nodes.n, N, settings.search.seed, settings.search.budget)

    echo: Dict[str, Any] = {
        "input": str(config.input_path),
        "degree": N,
        "degree_arg": config.degree,
        "seed": settings.search.seed,
        "budget": settings.search.budget,
        "max_nu": settings.guardrails.max_nu,
        "settings": settings.to_dict(),
    }
    report = analyze(nodes, N, settings, values=document.values, config_echo=echo)
    rendered = emit_report(report) if config.fmt == "json" else render_table(report)

    if config.output is not None:
        write_text(Path(config.output), rendered)
        log.info("report written to %s", config.output)
    if not report.all_pass:
        log.error("%s certificate(s) failed", len(report.failures))
    return (0 if report.all_pass else 1), report, rendered
