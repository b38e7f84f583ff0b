"""Settings loader for vanderbound.

Numerical tolerances, desk-scale guardrails and the direction-search
configuration come from a JSON file plus environment variables.

Environment:
  - VANDERBOUND_SETTINGS: path to a JSON settings file
  - VANDERBOUND_MAX_NU / VANDERBOUND_SEED / VANDERBOUND_BUDGET: integer overrides
  - VANDERBOUND_LOG_LEVEL: default log level for the CLI

Settings file format (every key optional):
{
  "tolerances": {"relative_slack": 1e-9, "kronecker_abs": 1e-8},
  "guardrails": {"max_nodes": 8, "max_nu": 5000},
  "search": {"budget": 1024, "seed": 0}
}
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Type, TypeVar

from .env import env_int, env_str

T = TypeVar("T")

DEFAULT_LOG_LEVEL = "INFO"


@dataclass(frozen=True)
class Tolerances:
    relative_slack: float = 1e-9
    kronecker_abs: float = 1e-8
    rank_rel: float = 1e-10
    node_norm: float = 1e-12
    stale_certificate: float = 1e-9
    eigen_cutoff: float = 1e-12
    sigma_relation_abs: float = 1e-9


@dataclass(frozen=True)
class Guardrails:
    max_nodes: int = 8
    max_dim: int = 4
    max_degree: int = 16
    max_nu: int = 5000


@dataclass(frozen=True)
class SearchConfig:
    """Direction search for rho(Z, j) when no exact solver applies (n >= 3)."""

    budget: int = 1024
    seed: int = 0
    ascent_iterations: int = 64
    initial_step: float = 0.25
    min_step: float = 1e-6

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError(f"search budget must be >= 0, got {self.budget}.")
        if self.seed < 0:
            raise ValueError(f"search seed must be >= 0, got {self.seed}.")
        if not (0 < self.min_step <= self.initial_step):
            raise ValueError("search steps must satisfy 0 < min_step <= initial_step.")


@dataclass(frozen=True)
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    guardrails: Guardrails = field(default_factory=Guardrails)
    search: SearchConfig = field(default_factory=SearchConfig)
    log_level: str = DEFAULT_LOG_LEVEL

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _as_dict(v: Any) -> Dict[str, Any]:
    return v if isinstance(v, dict) else {}


def _build_section(cls: Type[T], payload: Mapping[str, Any], *, section: str) -> T:
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ValueError(f"Unknown key(s) in settings section `{section}`: {', '.join(unknown)}.")
    return cls(**payload)


def settings_from_mapping(payload: Mapping[str, Any]) -> Settings:
    """Build Settings from a decoded settings document."""

    if not isinstance(payload, dict):
        raise ValueError("Settings must be a JSON object.")
    unknown = sorted(set(payload) - {"tolerances", "guardrails", "search", "log_level"})
    if unknown:
        raise ValueError(f"Unknown settings section(s): {', '.join(unknown)}.")
    return Settings(
        tolerances=_build_section(Tolerances, _as_dict(payload.get("tolerances")), section="tolerances"),
        guardrails=_build_section(Guardrails, _as_dict(payload.get("guardrails")), section="guardrails"),
        search=_build_section(SearchConfig, _as_dict(payload.get("search")), section="search"),
        log_level=str(payload.get("log_level") or DEFAULT_LOG_LEVEL),
    )


def apply_env_overrides(settings: Settings) -> Settings:
    """Apply VANDERBOUND_* overrides on top of file settings."""

    max_nu = env_int("VANDERBOUND_MAX_NU")
    seed = env_int("VANDERBOUND_SEED")
    budget = env_int("VANDERBOUND_BUDGET")
    log_level = env_str("VANDERBOUND_LOG_LEVEL")

    if max_nu is not None:
        settings = replace(settings, guardrails=replace(settings.guardrails, max_nu=max_nu))
    if seed is not None:
        settings = replace(settings, search=replace(settings.search, seed=seed))
    if budget is not None:
        settings = replace(settings, search=replace(settings.search, budget=budget))
    if log_level is not None:
        settings = replace(settings, log_level=log_level.upper())
    return settings


def load_settings(path: Optional[Path] = None) -> Settings:
    """Load settings from `path` (or $VANDERBOUND_SETTINGS), then env overrides.

    No file at all means defaults; a named file that does not exist raises
    FileNotFoundError.
    """

    if path is None:
        env_path = env_str("VANDERBOUND_SETTINGS")
        path = Path(env_path) if env_path else None

    if path is None:
        return apply_env_overrides(Settings())

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Settings file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"Settings file is not valid JSON: {path} (line {exc.lineno})") from exc
    return apply_env_overrides(settings_from_mapping(payload))
