"""Exact and brute-force references for the floating-point core.

Rational quantities use `fractions.Fraction`; linear systems go through a
fraction-free (Bareiss) echelon form on integer-scaled rows. `grid_rho`
evaluates the projection separation over a dense direction grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...core.errors import ContractViolation
from ...core.multiindex import enumerate_monomials, multinomial

Rational = Fraction
ExactPoint = Tuple[Fraction, ...]

GRID_CHUNK = 1 << 16
MIN_RESOLUTION = 1000


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, float, Decimal, string or Fraction."""

    return x if isinstance(x, Fraction) else Fraction(x)


def exact_expand_product(roots: Sequence) -> List[Fraction]:
    """Ascending coefficients of prod (t - r) by repeated multiplication."""

    coeffs = [Fraction(1)]
    for r in map(as_fraction, roots):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return coeffs


def exact_lagrange_univariate(t: Sequence, j: int) -> List[Fraction]:
    """Coefficients of prod_{i != j} (t - t_i) / (t_j - t_i)."""

    nodes = [as_fraction(x) for x in t]
    if not 0 <= j < len(nodes):
        raise IndexError(f"node index {j} out of range for {len(nodes)} nodes")
    others = nodes[:j] + nodes[j + 1 :]
    denom = Fraction(1)
    for x in others:
        if x == nodes[j]:
            raise ContractViolation(f"node {j} is duplicated; the Lagrange basis does not exist")
        denom *= nodes[j] - x
    return [c / denom for c in exact_expand_product(others)]


def exact_divided_differences(t: Sequence, y: Sequence) -> List[Fraction]:
    nodes = [as_fraction(x) for x in t]
    table = [as_fraction(v) for v in y]
    if len(table) != len(nodes):
        raise ContractViolation(f"expected {len(nodes)} values, got {len(table)}")
    out = [table[0]]
    for k in range(1, len(nodes)):
        for i in range(len(nodes) - k):
            gap = nodes[i + k] - nodes[i]
            if gap == 0:
                raise ContractViolation("divided differences need distinct nodes")
            table[i] = (table[i + 1] - table[i]) / gap
        out.append(table[0])
    return out


def exact_evaluate(coeffs: Sequence[Fraction], t) -> Fraction:
    acc = Fraction(0)
    x = as_fraction(t)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def exact_monomial_rows(points: Sequence[Sequence], N: int) -> List[List[Fraction]]:
    """Rows of z^alpha in graded order, in exact arithmetic."""

    pts = [tuple(as_fraction(x) for x in z) for z in points]
    if not pts:
        return []
    n = len(pts[0])
    alphas = enumerate_monomials(n, N)
    rows = []
    for z in pts:
        row = []
        for alpha in alphas:
            value = Fraction(1)
            for x, a in zip(z, alpha):
                value *= x**a
            row.append(value)
        rows.append(row)
    return rows


def _integer_scaled(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in rows:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def bareiss_echelon(matrix: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form over the first `ncols` columns.

    Columns without a pivot are skipped; every division is exact.
    """

    A = [list(row) for row in matrix]
    m = len(A)
    width = len(A[0]) if A else 0
    prev = 1
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, m):
            for k in range(c + 1, width):
                q, rem = divmod(A[r][c] * A[i][k] - A[i][c] * A[r][k], prev)
                if rem:
                    raise ContractViolation("Bareiss division left a remainder")
                A[i][k] = q
            A[i][c] = 0
        prev = A[r][c]
        pivots.append(c)
        r += 1
    return A, pivots


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((p * q for p, q in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class ExactSolution:
    rank: int
    pivots: Tuple[int, ...]
    coeffs: Optional[Tuple[Fraction, ...]]


def exact_solve(rows: Sequence[Sequence], rhs: Sequence) -> ExactSolution:
    """Basic solution of rows @ x = rhs (free variables set to 0).

    `coeffs` is None when the system is inconsistent.
    """

    ncols = len(rows[0]) if rows else 0
    augmented = [[as_fraction(x) for x in row] + [as_fraction(b)] for row, b in zip(rows, rhs)]
    A, pivots = bareiss_echelon(_integer_scaled(augmented), ncols + 1)
    coeff_pivots = [c for c in pivots if c < ncols]
    rank = len(coeff_pivots)
    if len(pivots) > rank:
        return ExactSolution(rank=rank, pivots=tuple(coeff_pivots), coeffs=None)
    x = [Fraction(0)] * ncols
    for r in range(rank - 1, -1, -1):
        c = coeff_pivots[r]
        acc = Fraction(A[r][ncols])
        for k in coeff_pivots[r + 1 :]:
            acc -= A[r][k] * x[k]
        x[c] = acc / A[r][c]
    return ExactSolution(rank=rank, pivots=tuple(coeff_pivots), coeffs=tuple(x))


def exact_rank(points: Sequence[Sequence], N: int) -> int:
    rows = exact_monomial_rows(points, N)
    if not rows:
        return 0
    _, pivots = bareiss_echelon(_integer_scaled(rows), len(rows[0]))
    return len(pivots)


def exact_vandermonde_solve(points: Sequence[Sequence], N: int, j: int) -> ExactSolution:
    """Minimum-norm c with V_N(Z) c = e_j, in exact arithmetic.

    c = V^T w with (V V^T) w = e_j, so c is orthogonal to ker V and 1/|c|^2 is
    the squared distance from row j to the span of the other rows. `coeffs`
    is None when the exact rank is below s; `pivots` index the Gram rows.
    """

    s = len(points)
    if not 0 <= j < s:
        raise IndexError(f"node index {j} out of range for {s} nodes")
    if N < s - 1:
        raise ContractViolation(f"degree N = {N} is below s - 1 = {s - 1}")
    rows = exact_monomial_rows(points, N)
    gram = [[_dot(a, b) for b in rows] for a in rows]
    rhs = [Fraction(int(i == j)) for i in range(s)]
    w = exact_solve(gram, rhs)
    if w.rank < s or w.coeffs is None:
        return ExactSolution(rank=w.rank, pivots=w.pivots, coeffs=None)
    coeffs = tuple(sum((w_i * row[k] for w_i, row in zip(w.coeffs, rows)), Fraction(0)) for k in range(len(rows[0])))
    return ExactSolution(rank=w.rank, pivots=w.pivots, coeffs=coeffs)


def exact_squared_distance_to_span(x: Sequence, B: Sequence[Sequence]) -> Fraction:
    """|x - proj_span(B) x|^2 from the rational Gram system G c = B x."""

    xv = [as_fraction(v) for v in x]
    basis = [[as_fraction(v) for v in b] for b in B]
    xx = _dot(xv, xv)
    if not basis:
        return xx
    for b in basis:
        if len(b) != len(xv):
            raise ContractViolation("span vectors and x must have the same length")
    gram = [[_dot(a, b) for b in basis] for a in basis]
    bx = [_dot(a, xv) for a in basis]
    solution = exact_solve(gram, bx)
    if solution.coeffs is None:
        raise ContractViolation("Gram normal equations came out inconsistent")
    return xx - sum((c * d for c, d in zip(solution.coeffs, bx)), Fraction(0))


def exact_lagrange_polynomial(points: Sequence[Sequence], j: int, v: Sequence, N: int) -> List[Fraction]:
    """Q_j = p_j(<v, z>) in exact arithmetic for a rational direction v."""

    pts = [tuple(as_fraction(x) for x in z) for z in points]
    direction = [as_fraction(x) for x in v]
    n = len(direction)
    t = [sum((a * b for a, b in zip(direction, z)), Fraction(0)) for z in pts]
    a = exact_lagrange_univariate(t, j)
    out = []
    for alpha in enumerate_monomials(n, N):
        k = sum(alpha)
        if k >= len(a):
            out.append(Fraction(0))
            continue
        power = Fraction(1)
        for x, e in zip(direction, alpha):
            power *= x**e
        out.append(a[k] * multinomial(k, alpha) * power)
    return out


def _grid_directions(n: int, resolution: int, start: int, stop: int) -> np.ndarray:
    k = np.arange(start, stop, dtype=float)
    if n == 2:
        theta = math.pi * k / resolution
        return np.column_stack([np.cos(theta), np.sin(theta)])
    # Fibonacci sphere
    z = 1.0 - 2.0 * (k + 0.5) / resolution
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def grid_rho(points: np.ndarray, j: int, resolution: int) -> float:
    """max over a direction grid of min_{i != j} |<v, z_j - z_i>|.

    n = 1 returns the minimal gap; n = 2 uses angles pi k / resolution;
    n = 3 a Fibonacci sphere with `resolution` points.
    """

    pts = np.atleast_2d(np.asarray(points, dtype=float))
    s, n = pts.shape
    if not 0 <= j < s:
        raise IndexError(f"node index {j} out of range for {s} nodes")
    if n not in (1, 2, 3):
        raise ContractViolation(f"grid_rho supports n in (1, 2, 3), got n = {n}")
    if resolution < MIN_RESOLUTION:
        raise ContractViolation(f"grid resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    U = pts[j] - np.delete(pts, j, axis=0)
    if n == 1:
        return float(np.min(np.abs(U[:, 0])))

    best = -math.inf
    for start in range(0, resolution, GRID_CHUNK):
        C = _grid_directions(n, resolution, start, min(start + GRID_CHUNK, resolution))
        values = np.min(np.abs(C @ U.T), axis=1)
        chunk_best = float(values.max())
        if chunk_best > best:
            best = chunk_best
    return best
