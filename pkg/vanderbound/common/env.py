"""Environment helpers: repo-root `.env` loading and typed variable lookup.

The CLI loads `.env` from the repository root before parsing arguments so that
`VANDERBOUND_SETTINGS` and the override variables below can live there.

`.env` rules:
  - Lines: KEY=VALUE, optional leading 'export '
  - Empty lines and '#' comments are ignored
  - Surrounding single/double quotes are stripped
  - Existing environment variables win unless `override=True`
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict, Optional

ENV_PREFIX = "VANDERBOUND_"


def _unquote(value: str) -> str:
    s = value.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in {'"', "'"}:
        return s[1:-1]
    return s


def parse_env_lines(text: str) -> Dict[str, str]:
    """Parse `.env` text into a mapping (no side effects)."""

    out: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        line = line.removeprefix("export ").strip()
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            continue
        out[key] = _unquote(value)
    return out


def load_repo_dotenv(*, repo_root: Path, filename: str = ".env", override: bool = False) -> Dict[str, str]:
    """Load `.env` under repo_root (if it exists) into `os.environ`."""

    path = Path(repo_root) / filename
    if not path.exists():
        return {}
    parsed = parse_env_lines(path.read_text(encoding="utf-8"))
    for key, value in parsed.items():
        if override or key not in os.environ:
            os.environ[key] = value
    return parsed


def env_str(name: str) -> Optional[str]:
    """Return a stripped variable value, or None when unset/blank."""

    value = (os.environ.get(name) or "").strip()
    return value or None


def env_int(name: str) -> Optional[int]:
    """Integer variable; malformed values fail loudly with the variable name."""

    value = env_str(name)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {value!r}.") from None
