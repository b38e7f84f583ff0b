"""Oracle tier: compare the floating-point core against exact references.

Four seeded comparisons, plus an optional exact rank check on a document:
  - univariate Lagrange coefficients vs exact rational expansion
  - exact rank of V_{s-1}(Z) equals s on random rational node sets
  - exact planar solver vs a dense angular grid
  - row distances vs exact Gram distances and minimum-norm solves
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from rich.progress import Progress

from ...common.logging import get_logger
from ...core.geometry import NodeSet, exact_rho_planar
from ...core.linalg import distance_to_span
from ...core.univariate import lagrange_coeffs
from ...core.vandermonde import build
from .oracle import (
    exact_lagrange_univariate,
    exact_monomial_rows,
    exact_rank,
    exact_squared_distance_to_span,
    exact_vandermonde_solve,
    grid_rho,
)

logger = get_logger(__name__, stage="oracle-check")

LAGRANGE_REL_TOL = 1e-12
PLANAR_TOL = 1e-4
DISTANCE_TOL = 1e-8
MAX_DENOMINATOR = 64


def random_rational_points(
    rng: np.random.Generator,
    s: int,
    n: int,
    *,
    max_den: int = MAX_DENOMINATOR,
) -> List[Tuple[Fraction, ...]]:
    """s distinct rational points in the closed unit ball, denominators <= max_den."""

    points: List[Tuple[Fraction, ...]] = []
    seen = set()
    while len(points) < s:
        coords = []
        for _ in range(n):
            d = int(rng.integers(1, max_den + 1))
            coords.append(Fraction(int(rng.integers(-d, d + 1)), d))
        point = tuple(coords)
        if sum(x * x for x in point) > 1 or point in seen:
            continue
        seen.add(point)
        points.append(point)
    return points


def _float_points(points: Sequence[Sequence[Fraction]]) -> np.ndarray:
    return np.array([[float(x) for x in z] for z in points], dtype=float)


def check_univariate(rng: np.random.Generator, count: int, *, progress: Optional[Progress] = None) -> Dict[str, Any]:
    """Floating Lagrange coefficients vs the exact expansion of the float nodes."""

    task = progress.add_task("oracle: univariate Lagrange", total=count) if progress is not None else None
    worst = 0.0
    failed: List[int] = []
    for i in range(count):
        s = int(rng.integers(2, 6))
        t = _float_points(random_rational_points(rng, s, 1))[:, 0]
        for j in range(s):
            exact = exact_lagrange_univariate([Fraction(x) for x in t], j)
            scale = max(abs(c) for c in exact)
            err = max(abs(Fraction(float(a)) - b) for a, b in zip(lagrange_coeffs(t, j), exact))
            rel = float(err / scale)
            worst = max(worst, rel)
            if rel > LAGRANGE_REL_TOL and i not in failed:
                failed.append(i)
        if task is not None:
            progress.advance(task)
    logger.info("univariate: %s instances, worst relative error %r", count, worst)
    return {"instances": count, "worst_relative_error": worst, "tolerance": LAGRANGE_REL_TOL, "failed": failed}


def check_rank(rng: np.random.Generator, count: int, *, progress: Optional[Progress] = None) -> Dict[str, Any]:
    """Exact rank of V_{s-1}(Z) on random rational node sets (s <= 5, n <= 3)."""

    task = progress.add_task("oracle: exact rank", total=count) if progress is not None else None
    failed: List[int] = []
    for i in range(count):
        s = int(rng.integers(2, 6))
        n = int(rng.integers(1, 4))
        points = random_rational_points(rng, s, n)
        rank = exact_rank(points, s - 1)
        if rank != s:
            logger.error("instance %s: exact rank %s != s = %s", i, rank, s)
            failed.append(i)
        if task is not None:
            progress.advance(task)
    return {"instances": count, "failed": failed}


def check_planar(
    rng: np.random.Generator,
    count: int,
    resolution: int,
    *,
    progress: Optional[Progress] = None,
) -> Dict[str, Any]:
    """Exact planar rho against grid_rho at the given resolution."""

    task = progress.add_task("oracle: planar rho vs grid", total=count) if progress is not None else None
    worst = 0.0
    failed: List[int] = []
    for i in range(count):
        s = int(rng.integers(2, 6))
        Z = NodeSet(_float_points(random_rational_points(rng, s, 2)))
        j = int(rng.integers(0, s))
        exact = exact_rho_planar(Z, j).delta
        grid = grid_rho(Z.points, j, resolution)
        gap = abs(exact - grid)
        worst = max(worst, gap)
        # a grid direction can never beat the exact maximum
        if gap > PLANAR_TOL or grid > exact + 1e-12:
            logger.error("instance %s: exact %r vs grid %r", i, exact, grid)
            failed.append(i)
        if task is not None:
            progress.advance(task)
    return {"instances": count, "resolution": resolution, "worst_gap": worst, "tolerance": PLANAR_TOL, "failed": failed}


def check_distance(rng: np.random.Generator, count: int, *, progress: Optional[Progress] = None) -> Dict[str, Any]:
    """Floating row distances against exact ones (s <= 5, n <= 3, N in {s-1, s}).

    Per row j the exact squared distance times |c_j|^2 of the minimum-norm
    exact solve must be exactly 1, and `distance_to_span` must match the exact
    distance to DISTANCE_TOL.
    """

    task = progress.add_task("oracle: row distances", total=count) if progress is not None else None
    worst = 0.0
    failed: List[int] = []
    for i in range(count):
        s = int(rng.integers(2, 6))
        n = int(rng.integers(1, 4))
        N = s - 1 + int(rng.integers(0, 2))
        Z = NodeSet(_float_points(random_rational_points(rng, s, n)))
        points = [tuple(Fraction(x) for x in z) for z in Z.points]
        rows = exact_monomial_rows(points, N)
        V = build(Z, N).V
        consistent = True
        for j in range(s):
            d2 = exact_squared_distance_to_span(rows[j], rows[:j] + rows[j + 1 :])
            c = exact_vandermonde_solve(points, N, j).coeffs
            if c is None or d2 * sum((x * x for x in c), Fraction(0)) != 1:
                consistent = False
            err = abs(distance_to_span(V[j], np.delete(V, j, axis=0)) - math.sqrt(float(d2)))
            worst = max(worst, err)
            if err > DISTANCE_TOL:
                consistent = False
        if not consistent:
            logger.error("instance %s: row distances disagree with the exact values (s=%s, n=%s, N=%s)", i, s, n, N)
            failed.append(i)
        if task is not None:
            progress.advance(task)
    logger.info("distance: %s instances, worst absolute error %r", count, worst)
    return {"instances": count, "worst_error": worst, "tolerance": DISTANCE_TOL, "failed": failed}


def check_document_rank(nodes: NodeSet, N: int) -> Dict[str, Any]:
    """Exact rank of V_N(Z) on the rational values the document was parsed from."""

    points = nodes.exact if nodes.exact is not None else [tuple(Fraction(x) for x in z) for z in nodes.points]
    rank = exact_rank(points, N)
    return {"s": nodes.s, "n": nodes.n, "N": N, "rank": rank, "failed": [] if rank == nodes.s else [0]}


def run_oracle_check(
    *,
    seed: int = 0,
    univariate_count: int = 200,
    rank_count: int = 200,
    planar_count: int = 100,
    resolution: int = 1_000_000,
    distance_count: int = 100,
    nodes: Optional[NodeSet] = None,
    degree: Optional[int] = None,
    progress: Optional[Progress] = None,
) -> Dict[str, Any]:
    """Run every oracle comparison; `all_pass` is False if any instance failed."""

    rng = np.random.default_rng(seed)
    summary: Dict[str, Any] = {
        "config": {
            "seed": seed,
            "univariate_count": univariate_count,
            "rank_count": rank_count,
            "planar_count": planar_count,
            "resolution": resolution,
            "distance_count": distance_count,
        },
        "univariate": check_univariate(rng, univariate_count, progress=progress),
        "rank": check_rank(rng, rank_count, progress=progress),
        "planar": check_planar(rng, planar_count, resolution, progress=progress),
        "distance": check_distance(rng, distance_count, progress=progress),
    }
    if nodes is not None:
        N = nodes.s - 1 if degree is None else degree
        summary["input"] = check_document_rank(nodes, N)

    sections = [v for k, v in summary.items() if k != "config"]
    summary["all_pass"] = all(not section["failed"] for section in sections)
    return summary
