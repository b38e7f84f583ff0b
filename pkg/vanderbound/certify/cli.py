"""Vandermonde stability certification CLI (analyze + suite + oracle-check)."""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn, TimeRemainingColumn

from ..common.batching import ensure_timestamp_suffix, utc_now
from ..common.dataset import load_nodeset
from ..common.env import load_repo_dotenv
from ..common.io import dumps_json, write_text
from ..common.logging import get_logger, setup_logging
from ..common.settings import load_settings
from ..core.errors import VanderboundError
from .evaluation.oracle_check import run_oracle_check
from .pipeline.analyze import FORMATS, AnalyzeConfig, effective_settings, parse_degree, run_analyze
from .pipeline.suite import SuiteConfig, run_suite


REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_RUNS_ROOT = REPO_ROOT / "runs"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

logger = get_logger(__name__, stage="cli")


def _progress() -> Progress:
    # stdout may carry the report; bars go to stderr
    return Progress(
        TextColumn("{task.description}", justify="left"),
        BarColumn(),
        TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
        TextColumn("•"),
        TimeElapsedColumn(),
        TextColumn("ETA"),
        TimeRemainingColumn(),
        console=Console(stderr=True),
    )


def _sanitize_for_json(obj: Any) -> Any:
    if obj is None:
        return None
    if isinstance(obj, (str, int, float, bool)):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _sanitize_for_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_sanitize_for_json(v) for v in obj]
    return str(obj)


def _build_invocation(args: argparse.Namespace, *, effective_args: Dict[str, Any]) -> Dict[str, Any]:
    parsed = {k: v for k, v in vars(args).items() if k != "func"}
    cmd_module = " ".join(
        [
            shlex.quote(sys.executable),
            "-m",
            "vanderbound.certify",
            *[shlex.quote(a) for a in sys.argv[1:]],
        ]
    )
    return {
        "at": utc_now(),
        "cwd": str(Path.cwd()),
        "argv": list(sys.argv),
        "command_module": cmd_module,
        "cmd": getattr(args, "cmd", None),
        "parsed_args": _sanitize_for_json(parsed),
        "effective_args": _sanitize_for_json(effective_args),
    }


def _pair(value: str) -> tuple[int, int]:
    """argparse type for `LO:HI` integer ranges (a single integer means LO = HI)."""

    lo, sep, hi = value.partition(":")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise ValueError(f"expected LO:HI, got {value!r}") from None


def _setup_logging(args: argparse.Namespace, level: str) -> None:
    setup_logging(Path(args.log_dir) if args.log_dir else None, level=args.log_level or level)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        write_text(Path(output), text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_analyze(args: argparse.Namespace) -> int:
    settings = load_settings(Path(args.settings) if args.settings else None)
    _setup_logging(args, settings.log_level)

    config = AnalyzeConfig(
        input_path=Path(args.input),
        degree=args.degree,
        seed=args.seed,
        budget=args.budget,
        max_nu=args.max_nu,
        output=Path(args.output) if args.output else None,
        fmt=args.format,
    )
    code, _, rendered = run_analyze(config, settings=settings)
    if config.output is None:
        _emit(rendered, None)
    return code


def cmd_suite(args: argparse.Namespace) -> int:
    settings = load_settings(Path(args.settings) if args.settings else None)
    settings = effective_settings(settings, budget=args.budget, max_nu=args.max_nu)

    run_dir: Optional[Path] = None
    if args.run_id:
        run_id = args.run_id if args.resume else ensure_timestamp_suffix(args.run_id)
        run_dir = Path(args.runs_dir or DEFAULT_RUNS_ROOT) / run_id
        if args.log_dir is None:
            args.log_dir = str(run_dir / "logs")
    _setup_logging(args, settings.log_level)

    config = SuiteConfig(
        seed=args.seed,
        count=args.count,
        s_range=args.s_range,
        n_range=args.n_range,
        degree_offsets=tuple(args.degree_offset or (0,)),
        min_separation=args.min_separation,
        settings=settings,
    )
    invocation = _build_invocation(args, effective_args={"run_dir": run_dir, **config.to_dict()})

    with _progress() as progress:
        summary = run_suite(config, run_dir=run_dir, resume=args.resume, progress=progress, invocation=invocation)
    _emit(dumps_json(summary), args.output)
    return EXIT_PASS if summary["all_pass"] else EXIT_FAIL


def cmd_oracle_check(args: argparse.Namespace) -> int:
    settings = load_settings(Path(args.settings) if args.settings else None)
    _setup_logging(args, settings.log_level)

    nodes = None
    if args.input:
        nodes = load_nodeset(Path(args.input), norm_tol=settings.tolerances.node_norm).nodes
    degree = None if args.degree == "auto" else args.degree
    if nodes is not None and degree is not None and degree < nodes.s - 1:
        raise ValueError(f"degree N = {degree} is below s - 1 = {nodes.s - 1}")

    with _progress() as progress:
        summary = run_oracle_check(
            seed=args.seed,
            univariate_count=args.univariate_count,
            rank_count=args.rank_count,
            planar_count=args.planar_count,
            resolution=args.resolution,
            distance_count=args.distance_count,
            nodes=nodes,
            degree=degree,
            progress=progress,
        )
    _emit(dumps_json(summary), args.output)
    return EXIT_PASS if summary["all_pass"] else EXIT_FAIL


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--settings", default=None, help="settings JSON (or set VANDERBOUND_SETTINGS)")
    p.add_argument("--output", default=None, help="write output here instead of stdout")
    p.add_argument("--log-level", default=None, help="override the settings log level")
    p.add_argument("--log-dir", default=None, help="also write rotating log files here")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vanderbound")
    sub = p.add_subparsers(dest="cmd", required=True)

    pan = sub.add_parser("analyze", help="Certify one node set")
    pan.add_argument("--input", required=True, help="node-set JSON document")
    pan.add_argument("--degree", type=parse_degree, default="auto", help="total degree N, or 'auto' for s - 1")
    pan.add_argument("--seed", type=int, default=None, help="direction search seed")
    pan.add_argument("--budget", type=int, default=None, help="direction search budget R")
    pan.add_argument("--format", choices=FORMATS, default="json")
    pan.add_argument("--max-nu", dest="max_nu", type=int, default=None, help="guardrail on the number of monomials")
    _add_common(pan)
    pan.set_defaults(func=cmd_analyze)

    psu = sub.add_parser("suite", help="Seeded randomized certification suite")
    psu.add_argument("--seed", type=int, default=0, help="instance i draws from default_rng([seed, i])")
    psu.add_argument("--count", type=int, default=100)
    psu.add_argument("--s-range", dest="s_range", type=_pair, default=(2, 5), help="node count range LO:HI")
    psu.add_argument("--n-range", dest="n_range", type=_pair, default=(1, 3), help="dimension range LO:HI")
    psu.add_argument(
        "--degree-offset", dest="degree_offset", type=int, action="append", default=None, help="N = s - 1 + offset (repeatable)"
    )
    psu.add_argument("--min-separation", dest="min_separation", type=float, default=0.0)
    psu.add_argument("--budget", type=int, default=None)
    psu.add_argument("--max-nu", dest="max_nu", type=int, default=None)
    psu.add_argument("--run-id", dest="run_id", default=None, help="keep run state under runs/<run_id>_<timestamp>")
    psu.add_argument("--runs-dir", dest="runs_dir", default=None)
    psu.add_argument("--resume", action="store_true", help="continue runs/<run_id> (pass the full suffixed id)")
    _add_common(psu)
    psu.set_defaults(func=cmd_suite)

    por = sub.add_parser("oracle-check", help="Compare the floating-point core against exact references")
    por.add_argument("--seed", type=int, default=0)
    por.add_argument("--univariate-count", dest="univariate_count", type=int, default=200)
    por.add_argument("--rank-count", dest="rank_count", type=int, default=200)
    por.add_argument("--planar-count", dest="planar_count", type=int, default=100)
    por.add_argument("--resolution", type=int, default=1_000_000, help="grid resolution for planar rho")
    por.add_argument("--distance-count", dest="distance_count", type=int, default=100)
    por.add_argument("--input", default=None, help="also check the exact rank of this document")
    por.add_argument("--degree", type=parse_degree, default="auto")
    _add_common(por)
    por.set_defaults(func=cmd_oracle_check)

    return p


def main(argv: Optional[list[str]] = None) -> int:
    # Load repo-root `.env` if present (does not override existing env by default).
    try:
        load_repo_dotenv(repo_root=REPO_ROOT, override=False)
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return int(args.func(args))
    except (VanderboundError, ValueError, FileNotFoundError, FileExistsError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
