"""Univariate interpolation: divided differences, Newton form, Lagrange basis.

Coefficient vectors are ascending in degree (c_0, c_1, ..., c_{s-1}).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .checks import BoundCheck, bound_power
from .errors import ContractViolation, InvalidNodeSetError

NODE_TOL = 1e-12


@dataclass(frozen=True)
class CoeffVector:
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, t: float) -> float:
        return horner(self.coeffs, t)


@dataclass(frozen=True)
class UnivariateNodes:
    t: Tuple[float, ...]
    kappa_1d: float = field(init=False)

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.t)
        if len(values) < 1:
            raise InvalidNodeSetError("need at least one node")
        for i, v in enumerate(values):
            if not math.isfinite(v) or abs(v) > 1.0 + NODE_TOL:
                raise InvalidNodeSetError(f"node {i} = {v!r} lies outside [-1, 1]", index=i)
        gaps = [abs(a - b) for a, b in itertools.combinations(values, 2)]
        for (i, a), (k, b) in itertools.combinations(enumerate(values), 2):
            if a == b:
                raise InvalidNodeSetError(f"nodes {i} and {k} coincide ({a!r})", index=k)
        object.__setattr__(self, "t", values)
        object.__setattr__(self, "kappa_1d", min(gaps) if gaps else math.inf)

    @property
    def s(self) -> int:
        return len(self.t)


def horner(coeffs: Sequence[float], t: float) -> float:
    acc = 0.0
    for c in reversed(list(coeffs)):
        acc = acc * t + c
    return float(acc)


def _check_values(nodes: UnivariateNodes, y: Sequence[float]) -> np.ndarray:
    values = np.asarray(y, dtype=float).ravel()
    if values.shape[0] != nodes.s:
        raise ContractViolation(f"expected {nodes.s} data values, got {values.shape[0]}")
    return values


def divided_differences(nodes: UnivariateNodes, y: Sequence[float]) -> np.ndarray:
    """Leading entries Delta_0..Delta_{s-1} of the divided-difference table."""

    table = _check_values(nodes, y).copy()
    t = nodes.t
    s = nodes.s
    out = [table[0]]
    # column k holds f[t_i, ..., t_{i+k}] at row i
    for k in range(1, s):
        for i in range(s - k):
            table[i] = (table[i + 1] - table[i]) / (t[i + k] - t[i])
        out.append(table[0])
    return np.array(out, dtype=float)


def elementary_symmetric(values: Sequence[float]) -> np.ndarray:
    """(e_0, ..., e_m) of the given values; e_0 = 1."""

    vals = [float(v) for v in values]
    e = np.zeros(len(vals) + 1)
    e[0] = 1.0
    for m, v in enumerate(vals, start=1):
        for k in range(m, 0, -1):
            e[k] += v * e[k - 1]
    return e


def product_coeffs(roots: Sequence[float]) -> np.ndarray:
    """Ascending coefficients of prod (t - r): A_k = (-1)^(m-k) e_{m-k}."""

    e = elementary_symmetric(roots)
    m = len(e) - 1
    return np.array([(-1.0) ** (m - k) * e[m - k] for k in range(m + 1)])


def newton_to_monomial(nodes: UnivariateNodes, deltas: Sequence[float]) -> CoeffVector:
    """Expand sum_j Delta_j prod_{i<j} (t - t_i) into monomial coefficients."""

    d = np.asarray(deltas, dtype=float).ravel()
    s = nodes.s
    if d.shape[0] != s:
        raise ContractViolation(f"expected {s} divided differences, got {d.shape[0]}")
    coeffs = np.zeros(s)
    for j in range(s):
        if d[j] == 0.0:
            continue
        coeffs[: j + 1] += d[j] * product_coeffs(nodes.t[:j])
    return CoeffVector(coeffs)


def interpolate(nodes: UnivariateNodes, y: Sequence[float]) -> CoeffVector:
    return newton_to_monomial(nodes, divided_differences(nodes, y))


def lagrange_basis_coeffs(nodes: UnivariateNodes, j: int) -> CoeffVector:
    """Coefficients of p_j(t) = prod_{i != j} (t - t_i) / (t_j - t_i)."""

    if not 0 <= j < nodes.s:
        raise IndexError(f"node index {j} out of range for {nodes.s} nodes")
    return CoeffVector(lagrange_coeffs(nodes.t, j))


def lagrange_coeffs(t: Sequence[float], j: int) -> np.ndarray:
    """Lagrange basis coefficients needing only t_j != t_i (others may coincide)."""

    others = [float(v) for i, v in enumerate(t) if i != j]
    coeffs = product_coeffs(others)
    # one difference at a time: the full product of tiny gaps underflows
    for v in others:
        diff = float(t[j]) - v
        if diff == 0.0:
            raise ContractViolation(f"node {j} coincides with another node")
        coeffs = coeffs / diff
    return coeffs


@dataclass(frozen=True)
class UnivariateCertificate:
    coeffs: CoeffVector
    deltas: np.ndarray
    checks: Tuple[BoundCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def violations(self) -> List[BoundCheck]:
        return [check for check in self.checks if not check.passed]


def check_lemma_univariate(
    nodes: UnivariateNodes,
    y: Sequence[float],
    *,
    slack_rel: float = 1e-9,
) -> UnivariateCertificate:
    """Coefficient bounds of the interpolant through (t_i, y_i).

    Per coefficient |c_k| <= |y| (s-k) (4/kappa)^(s-1), the sum with factor
    s(s+1)/2, and |Delta_j| <= 2^j |y| / kappa^j.
    """

    values = _check_values(nodes, y)
    s = nodes.s
    kappa = nodes.kappa_1d
    if s >= 2 and kappa > 2.0 + NODE_TOL:
        raise ContractViolation(f"minimal gap {kappa!r} exceeds 2; nodes are not in [-1, 1]")

    deltas = divided_differences(nodes, values)
    coeffs = newton_to_monomial(nodes, deltas)
    ynorm = float(np.max(np.abs(values)))
    growth = bound_power(4.0 / kappa, s - 1) if s >= 2 else 1.0

    checks: List[BoundCheck] = []
    for k, c in enumerate(coeffs.coeffs):
        checks.append(
            BoundCheck(
                name=f"|c_{k}|",
                family="univariate",
                actual=abs(float(c)),
                bound=ynorm * (s - k) * growth,
                slack_rel=slack_rel,
            )
        )
    checks.append(
        BoundCheck(
            name="sum |c_k|",
            family="univariate",
            actual=float(np.sum(np.abs(coeffs.coeffs))),
            bound=s * (s + 1) / 2 * ynorm * growth,
            slack_rel=slack_rel,
        )
    )
    for k, d in enumerate(deltas):
        checks.append(
            BoundCheck(
                name=f"|Delta_{k}|",
                family="univariate",
                actual=abs(float(d)),
                bound=bound_power(2.0 / kappa, k) * ynorm,
                slack_rel=slack_rel,
            )
        )
    return UnivariateCertificate(coeffs=coeffs, deltas=deltas, checks=tuple(checks))
