"""Node sets and the max-min projection separation rho(Z, j).

rho(Z, j) = max over unit v of min_{i != j} |<v, z_j - z_i>|. It is computed
exactly for n = 1, for two nodes, and in the plane; for n >= 3 the result is a
lower bound carried by its witness direction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common.logging import get_logger
from ..common.settings import SearchConfig
from .errors import ContractViolation, InvalidNodeSetError
from .linalg import row_norms, vector_norm

logger = get_logger(__name__).bind(stage="geometry")

NODE_NORM_TOL = 1e-12


@dataclass(frozen=True)
class NodeSet:
    """s >= 2 pairwise distinct points of the closed unit ball in R^n.

    `exact` optionally keeps the rational values the points were parsed from.
    """

    points: np.ndarray
    exact: Optional[Tuple[Tuple[Fraction, ...], ...]] = field(default=None, repr=False, compare=False)
    norm_tol: float = field(default=NODE_NORM_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise InvalidNodeSetError(f"points must be an (s, n) array with n >= 1, got shape {pts.shape}")
        for i, z in enumerate(pts):
            if not np.all(np.isfinite(z)):
                raise InvalidNodeSetError(f"point {i} has non-finite coordinates", index=i)
            norm = float(np.linalg.norm(z))
            if norm > 1.0 + self.norm_tol:
                raise InvalidNodeSetError(f"point {i} has norm {norm!r} > 1", index=i)
        for i, k in itertools.combinations(range(pts.shape[0]), 2):
            if np.array_equal(pts[i], pts[k]):
                raise InvalidNodeSetError(f"points {i} and {k} coincide", index=k)
        if pts.shape[0] < 2:
            raise InvalidNodeSetError(f"need at least 2 points, got {pts.shape[0]}")
        if self.exact is not None and len(self.exact) != pts.shape[0]:
            raise InvalidNodeSetError("exact coordinates do not match the points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def s(self) -> int:
        return int(self.points.shape[0])

    @property
    def n(self) -> int:
        return int(self.points.shape[1])

    def differences(self, j: int) -> np.ndarray:
        """Rows z_j - z_i for i != j, in index order."""

        self.check_index(j)
        return self.points[j] - np.delete(self.points, j, axis=0)

    def check_index(self, j: int) -> None:
        if not 0 <= j < self.s:
            raise IndexError(f"node index {j} out of range for {self.s} nodes")


@dataclass(frozen=True)
class DirectionCertificate:
    """Unit direction v with its achieved gap delta <= rho(Z, j)."""

    j: int
    v: np.ndarray
    delta: float
    exact: bool
    method: str

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "v": [float(x) for x in self.v],
            "delta": self.delta,
            "exact": self.exact,
            "method": self.method,
        }


def min_projection(U: np.ndarray, v: np.ndarray) -> float:
    return float(np.min(np.abs(U @ v)))


def recompute_gap(Z: NodeSet, j: int, v: Sequence[float]) -> float:
    """min_{i != j} |<v, z_j - z_i>| for the given direction."""

    return min_projection(Z.differences(j), np.asarray(v, dtype=float))


def _certificate(Z: NodeSet, j: int, v: np.ndarray, *, exact: bool, method: str) -> DirectionCertificate:
    v = np.asarray(v, dtype=float) / vector_norm(v)
    v.setflags(write=False)
    delta = recompute_gap(Z, j, v)
    if delta <= 0.0:
        raise ContractViolation(f"direction search for node {j} found no positive gap")
    return DirectionCertificate(j=j, v=v, delta=delta, exact=exact, method=method)


def _perp(w: np.ndarray) -> np.ndarray:
    return np.array([-w[1], w[0]])


def exact_rho_planar(Z: NodeSet, j: int) -> DirectionCertificate:
    """Exact rho(Z, j) in the plane over a finite candidate set.

    With v = (cos t, sin t) every constraint is r_i |cos(t - phi_i)|. The
    maximizer of the minimum is either a constraint's own maximum (v along
    u_i) or a crossing <v, u_i> = +-<v, u_k>, i.e. v orthogonal to u_i -+ u_k.
    Ties go to the lowest candidate index.
    """

    if Z.n != 2:
        raise ContractViolation(f"exact_rho_planar needs n = 2, got n = {Z.n}")
    U = Z.differences(j)
    candidates: List[np.ndarray] = [u / vector_norm(u) for u in U]
    for a, b in itertools.combinations(range(len(U)), 2):
        for w in (U[a] - U[b], U[a] + U[b]):
            norm = vector_norm(w)
            if norm > 0.0:
                candidates.append(_perp(w) / norm)
    C = np.vstack(candidates)
    values = np.min(np.abs(C @ U.T), axis=1)
    best = int(np.argmax(values))
    return _certificate(Z, j, C[best], exact=True, method="planar")


def _ascend(U: np.ndarray, v: np.ndarray, config: SearchConfig) -> Tuple[np.ndarray, float]:
    """Coordinate +-step perturbation with renormalization; halve the step when stuck."""

    best = min_projection(U, v)
    step = config.initial_step
    for _ in range(config.ascent_iterations):
        improved = False
        for ell in range(v.shape[0]):
            for sign in (1.0, -1.0):
                w = v.copy()
                w[ell] += sign * step
                norm = vector_norm(w)
                if norm == 0.0:
                    continue
                w /= norm
                value = min_projection(U, w)
                if value > best:
                    v, best, improved = w, value, True
        if not improved:
            step *= 0.5
            if step < config.min_step:
                break
    return v, best


def search_direction(Z: NodeSet, j: int, config: SearchConfig) -> DirectionCertificate:
    """Lower bound on rho(Z, j) from candidates plus local ascent.

    Candidates are the normalized differences followed by `config.budget`
    seeded Gaussian directions. Ascent starts only from candidates that beat
    the best value so far, so a larger budget never returns a smaller gap.
    """

    U = Z.differences(j)
    directions = [U / row_norms(U)[:, None]]
    if config.budget:
        rng = np.random.default_rng(config.seed)
        R = rng.standard_normal((config.budget, Z.n))
        norms = np.linalg.norm(R, axis=1, keepdims=True)
        directions.append(R[norms[:, 0] > 0] / norms[norms[:, 0] > 0])
    C = np.vstack(directions)
    values = np.min(np.abs(C @ U.T), axis=1)

    best_v = C[0]
    best = -math.inf
    ascents = 0
    for idx in range(C.shape[0]):
        if values[idx] <= best:
            continue
        v, value = _ascend(U, C[idx].copy(), config)
        ascents += 1
        if value > best:
            best_v, best = v, value
    logger.debug("node %s: %s candidates, %s ascents, gap %r", j, C.shape[0], ascents, best)
    return _certificate(Z, j, best_v, exact=False, method="search")


def projection_separation(Z: NodeSet, j: int, config: Optional[SearchConfig] = None) -> DirectionCertificate:
    """Certified lower bound on rho(Z, j), exact where a closed form exists."""

    config = config or SearchConfig()
    Z.check_index(j)
    if Z.n == 1:
        return _certificate(Z, j, np.array([1.0]), exact=True, method="univariate")
    if Z.s == 2:
        return _certificate(Z, j, Z.differences(j)[0], exact=True, method="two-point")
    if Z.n == 2:
        return exact_rho_planar(Z, j)
    return search_direction(Z, j, config)


def kappa_lower_bound(
    Z: NodeSet, config: Optional[SearchConfig] = None
) -> Tuple[float, Tuple[DirectionCertificate, ...]]:
    """kappa_hat = min_j delta_j <= kappa(Z), with the per-node certificates."""

    certs = tuple(projection_separation(Z, j, config) for j in range(Z.s))
    kappa_hat = min(cert.delta for cert in certs)
    logger.info("kappa_hat = %r (exact=%s)", kappa_hat, all(c.exact for c in certs))
    return kappa_hat, certs
