"""Monomial Vandermonde matrices, the explicit right inverse, and the report.

V_N(Z) is s x nu with V[i, k] = z_i^alpha_k in graded order. Its explicit
right inverse has the Lagrange polynomials Q_j as columns. Every stability
inequality is recorded as a `BoundCheck`; `analyze` runs the whole chain and
returns a `StabilityReport`.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..common.logging import get_logger
from ..common.settings import Settings, Tolerances
from .checks import BoundCheck, bound_power, failures
from .errors import ContractViolation, DegreeError, GuardrailError, StageError, VanderboundError
from .geometry import DirectionCertificate, NodeSet, kappa_lower_bound
from .linalg import (
    operator_norm,
    rank_estimate,
    sigma_min_from_column_distances,
    singular_values,
    span_projection,
    vector_norm,
)
from .multiindex import MonomialOrder, dimension, monomial_order
from .multivariate import STALE_TOL, MultivariatePolynomial, interpolant, lagrange_polynomial

logger = get_logger(__name__).bind(stage="analyze")


@dataclass(frozen=True)
class VandermondeSystem:
    Z: NodeSet
    N: int
    order: MonomialOrder
    V: np.ndarray = field(repr=False)

    @property
    def s(self) -> int:
        return self.Z.s

    @property
    def n(self) -> int:
        return self.Z.n

    @property
    def nu(self) -> int:
        return self.order.size

    def row(self, j: int) -> np.ndarray:
        self.Z.check_index(j)
        return self.V[j]

    def other_rows(self, j: int) -> np.ndarray:
        self.Z.check_index(j)
        return np.delete(self.V, j, axis=0)


def build(Z: NodeSet, N: int) -> VandermondeSystem:
    """V_N(Z) from per-coordinate power tables."""

    dimension(Z.n, N)
    order = monomial_order(Z.n, N)
    V = order.monomials(Z.points)
    V.setflags(write=False)
    return VandermondeSystem(Z=Z, N=N, order=order, V=V)


def _require_degree(sys: VandermondeSystem) -> None:
    if sys.N < sys.s - 1:
        raise DegreeError(f"degree N = {sys.N} is below s - 1 = {sys.s - 1}")


def _growth(base: float, s: int) -> float:
    return bound_power(base, s - 1)


def lagrange_basis(
    sys: VandermondeSystem,
    certs: Sequence[DirectionCertificate],
    *,
    stale_tol: float = STALE_TOL,
) -> List[MultivariatePolynomial]:
    _require_degree(sys)
    if len(certs) != sys.s:
        raise ContractViolation(f"expected {sys.s} certificates, got {len(certs)}")
    return [lagrange_polynomial(sys.Z, j, certs[j], sys.N, stale_tol=stale_tol) for j in range(sys.s)]


def right_inverse(
    sys: VandermondeSystem,
    certs: Sequence[DirectionCertificate],
    *,
    basis: Optional[Sequence[MultivariatePolynomial]] = None,
) -> np.ndarray:
    """nu x s matrix whose column j is the coefficient vector of Q_j."""

    _require_degree(sys)
    basis = lagrange_basis(sys, certs) if basis is None else basis
    return np.column_stack([q.coeffs.coeffs for q in basis])


def kronecker_residual(sys: VandermondeSystem, Vplus: np.ndarray) -> float:
    """max |V V+ - I|."""

    return float(np.max(np.abs(sys.V @ Vplus - np.eye(sys.s))))


@dataclass(frozen=True)
class RowDistance:
    dist_actual: float
    dist_lower_via_cj: float
    dist_bound: float
    rounding: float
    checks: Tuple[BoundCheck, ...]


def row_distance_certificate(
    sys: VandermondeSystem,
    j: int,
    cert: DirectionCertificate,
    *,
    qj: Optional[MultivariatePolynomial] = None,
    tolerances: Tolerances = Tolerances(),
) -> RowDistance:
    """dist(V_N(z_j), span of the other rows) against 1/|c_j| and the closed-form bound."""

    _require_degree(sys)
    s, n, nu = sys.s, sys.n, sys.nu
    if qj is None:
        qj = lagrange_polynomial(sys.Z, j, cert, sys.N, stale_tol=tolerances.stale_certificate)
    projection = span_projection(sys.row(j), sys.other_rows(j), cutoff=tolerances.eigen_cutoff)
    c_norm = vector_norm(qj.coeffs.coeffs)
    dist_lower = 1.0 / c_norm if c_norm != 0.0 else math.inf
    dist_bound = cert.delta ** (s - 1) / (_growth(4.0 * n, s) * s * math.sqrt(nu))
    checks = (
        BoundCheck(
            name=f"dist_bound[{j}] <= 1/|c_{j}|",
            family="distance",
            actual=dist_bound,
            bound=dist_lower,
            slack_rel=tolerances.relative_slack,
        ),
        BoundCheck(
            name=f"1/|c_{j}| <= dist_actual[{j}]",
            family="distance",
            actual=dist_lower,
            bound=projection.distance,
            slack_rel=tolerances.relative_slack,
            slack_abs=projection.rounding,
        ),
    )
    return RowDistance(
        dist_actual=projection.distance,
        dist_lower_via_cj=dist_lower,
        dist_bound=dist_bound,
        rounding=projection.rounding,
        checks=checks,
    )


@dataclass(frozen=True)
class RowAngle:
    sin_actual: float
    sin_bound: float
    row_norm: float
    checks: Tuple[BoundCheck, ...]


def row_angle(
    sys: VandermondeSystem,
    j: int,
    cert: DirectionCertificate,
    *,
    distance: Optional[RowDistance] = None,
    tolerances: Tolerances = Tolerances(),
) -> RowAngle:
    """sin of the angle between row j and the span of the other rows."""

    _require_degree(sys)
    s, n, nu = sys.s, sys.n, sys.nu
    distance = distance or row_distance_certificate(sys, j, cert, tolerances=tolerances)
    row_norm = vector_norm(sys.row(j))
    sin_actual = distance.dist_actual / row_norm
    sin_bound = cert.delta ** (s - 1) / (_growth(4.0 * n, s) * s * nu)
    checks = (
        BoundCheck(
            name=f"sin_bound[{j}] <= sin_theta[{j}]",
            family="angle",
            actual=sin_bound,
            bound=sin_actual,
            slack_rel=tolerances.relative_slack,
            slack_abs=distance.rounding / row_norm,
        ),
        # the constant monomial contributes 1 to every row
        BoundCheck(
            name=f"|row_{j}| >= 1",
            family="angle",
            actual=row_norm,
            bound=1.0,
            relation=">=",
            slack_rel=tolerances.relative_slack,
        ),
        BoundCheck(
            name=f"|row_{j}| <= sqrt(nu)",
            family="angle",
            actual=row_norm,
            bound=math.sqrt(nu),
            slack_rel=tolerances.relative_slack,
        ),
    )
    return RowAngle(sin_actual=sin_actual, sin_bound=sin_bound, row_norm=row_norm, checks=checks)


@dataclass(frozen=True)
class SpectralCertificate:
    sigma: np.ndarray
    sigma_min: float
    sigma_max: float
    sigma_min_bound: float
    sigma_max_bound: float
    frobenius_norm: float
    sigma_min_column_bound: float
    cond: float
    cond_bound: float
    rank: int
    kernel_dim: int
    checks: Tuple[BoundCheck, ...]


def spectral_certificate(
    sys: VandermondeSystem,
    kappa_hat: float,
    *,
    tolerances: Tolerances = Tolerances(),
) -> SpectralCertificate:
    """sigma_min, sigma_max, condition number and rank against their bounds.

    kappa_hat may be any positive lower bound on kappa(Z): every bound here is
    monotone in it.
    """

    _require_degree(sys)
    if sys.s < 2:
        raise ContractViolation("spectral certificate needs at least 2 nodes")
    if kappa_hat <= 0.0:
        raise ContractViolation(f"kappa_hat must be positive, got {kappa_hat!r}")
    s, n, nu = sys.s, sys.n, sys.nu
    slack = tolerances.relative_slack

    sigma = singular_values(sys.V)
    sigma_max = float(sigma[0])
    sigma_min = float(sigma[-1])
    rank = rank_estimate(sys.V, tolerances.rank_rel)
    kernel_dim = nu - rank
    frobenius = float(np.linalg.norm(sys.V))
    column_bound = sigma_min_from_column_distances(sys.V.T)

    sigma_min_bound = kappa_hat ** (s - 1) / (_growth(4.0 * n, s) * s * math.sqrt(s * nu))
    sigma_max_bound = math.sqrt(s * nu)
    cond = sigma_max / sigma_min if sigma_min > 0.0 else math.inf
    cond_bound = s * s * nu * _growth(4.0 * n / kappa_hat, s)

    if rank < s:
        logger.error("numerical rank %s < s = %s: V_N(Z) is not of full row rank", rank, s)

    checks = (
        BoundCheck("sigma_min >= sigma_min_bound", "sigma_min", sigma_min, sigma_min_bound, ">=", slack),
        BoundCheck("sigma_min >= column-distance bound", "sigma_min", sigma_min, column_bound, ">=", slack, 1e-9),
        BoundCheck("sigma_max <= |V|_F", "sigma_max", sigma_max, frobenius, "<=", slack),
        BoundCheck("|V|_F <= sqrt(s nu)", "sigma_max", frobenius, sigma_max_bound, "<=", slack),
        BoundCheck("sigma_max <= sqrt(s nu)", "sigma_max", sigma_max, sigma_max_bound, "<=", slack),
        BoundCheck("cond <= cond_bound", "condition", cond, cond_bound, "<=", slack),
        BoundCheck("rank == s", "rank", float(rank), float(s), "==", 0.0),
        BoundCheck("dim ker == nu - s", "kernel", float(kernel_dim), float(nu - s), "==", 0.0),
    )
    return SpectralCertificate(
        sigma=sigma,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        sigma_min_bound=sigma_min_bound,
        sigma_max_bound=sigma_max_bound,
        frobenius_norm=frobenius,
        sigma_min_column_bound=column_bound,
        cond=cond,
        cond_bound=cond_bound,
        rank=rank,
        kernel_dim=kernel_dim,
        checks=checks,
    )


@dataclass(frozen=True)
class SigmaRelation:
    sigma_min: float
    rinv_norm: float
    reciprocal: float
    check: BoundCheck


def right_inverse_sigma_relation(
    sys: VandermondeSystem,
    Vplus: np.ndarray,
    *,
    sigma_min: Optional[float] = None,
    tolerances: Tolerances = Tolerances(),
) -> SigmaRelation:
    """sigma_min(V) >= 1/|B| for any right inverse B of V."""

    residual = kronecker_residual(sys, Vplus)
    if residual > tolerances.kronecker_abs:
        raise ContractViolation(f"matrix is not a right inverse: max |V B - I| = {residual!r}")
    sigma_min = float(singular_values(sys.V)[-1]) if sigma_min is None else sigma_min
    rinv_norm = operator_norm(Vplus)
    reciprocal = 1.0 / rinv_norm
    check = BoundCheck(
        name="sigma_min >= 1/|V+|",
        family="sigma_relation",
        actual=sigma_min,
        bound=reciprocal,
        relation=">=",
        slack_rel=0.0,
        slack_abs=tolerances.sigma_relation_abs,
    )
    return SigmaRelation(sigma_min=sigma_min, rinv_norm=rinv_norm, reciprocal=reciprocal, check=check)


@dataclass(frozen=True)
class NodeRecord:
    j: int
    delta_j: float
    exact: bool
    method: str
    v: Tuple[float, ...]
    dist_actual: float
    dist_lower_via_cj: float
    dist_bound: float
    sin_theta_actual: float
    sin_theta_bound: float
    row_norm: float
    qj_norm: float
    qj_bound: float
    qj_bound_lemma: float
    kronecker_residual: float


@dataclass(frozen=True)
class GlobalRecord:
    s: int
    n: int
    N: int
    nu: int
    kappa_hat: float
    kappa_exact: bool
    sigma_min_actual: float
    sigma_min_bound: float
    sigma_max_actual: float
    sigma_max_bound: float
    frobenius_norm: float
    sigma_min_column_bound: float
    rinv_norm_actual: float
    rinv_norm_bound: float
    rinv_residual: float
    pinv_norm: float
    cond_actual: float
    cond_bound: float
    rank: int
    full_rank_expected: int
    kernel_dim: int
    all_pass: bool


@dataclass(frozen=True)
class InterpolantRecord:
    values: Tuple[float, ...]
    residual: float
    norm: float
    bound_mid: float
    bound_theorem: float
    coeffs: Tuple[float, ...]


@dataclass(frozen=True)
class StabilityReport:
    config: Dict[str, Any]
    per_node: Tuple[NodeRecord, ...]
    global_: GlobalRecord
    checks: Tuple[BoundCheck, ...]
    interpolant: Optional[InterpolantRecord] = None

    @property
    def all_pass(self) -> bool:
        return self.global_.all_pass

    @property
    def failures(self) -> List[str]:
        return failures(self.checks)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "config": self.config,
            "per_node": [_record_dict(r) for r in self.per_node],
            "global": _record_dict(self.global_),
        }
        if self.interpolant is not None:
            out["interpolant"] = _record_dict(self.interpolant)
        out["checks"] = [check.to_dict() for check in self.checks]
        out["failures"] = self.failures
        out["all_pass"] = self.all_pass
        return out


def _record_dict(record: Any) -> Dict[str, Any]:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(record).items()}


def _check_guardrails(Z: NodeSet, N: int, settings: Settings) -> None:
    g = settings.guardrails
    if Z.s > g.max_nodes:
        raise GuardrailError(f"s = {Z.s} exceeds max_nodes = {g.max_nodes}")
    if Z.n > g.max_dim:
        raise GuardrailError(f"n = {Z.n} exceeds max_dim = {g.max_dim}")
    if N > g.max_degree:
        raise GuardrailError(f"N = {N} exceeds max_degree = {g.max_degree}")
    nu = dimension(Z.n, N)
    if nu > g.max_nu:
        raise GuardrailError(f"nu = {nu} exceeds max_nu = {g.max_nu}")


@contextmanager
def _stage(name: str) -> Iterator[None]:
    """Tag errors with the stage; overflow to inf or nan lands in the checks instead."""

    try:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            yield
    except StageError:
        raise
    except (VanderboundError, ArithmeticError, ValueError) as exc:
        raise StageError(name, exc) from exc


def analyze(
    Z: NodeSet,
    N: int,
    settings: Optional[Settings] = None,
    *,
    values: Optional[Sequence[float]] = None,
    config_echo: Optional[Dict[str, Any]] = None,
) -> StabilityReport:
    """Run geometry, construction and every certificate on (Z, N)."""

    settings = settings or Settings()
    tol = settings.tolerances
    if N < Z.s - 1:
        raise DegreeError(f"degree N = {N} is below s - 1 = {Z.s - 1}")
    _check_guardrails(Z, N, settings)
    if values is not None and len(values) != Z.s:
        raise ContractViolation(f"expected {Z.s} values, got {len(values)}")

    s, n = Z.s, Z.n
    with _stage("geometry"):
        kappa_hat, certs = kappa_lower_bound(Z, settings.search)

    with _stage("construction"):
        sys = build(Z, N)
        basis = lagrange_basis(sys, certs, stale_tol=tol.stale_certificate)
        Vplus = right_inverse(sys, certs, basis=basis)

    nu = sys.nu
    checks: List[BoundCheck] = []
    per_node: List[NodeRecord] = []
    with _stage("per-node"):
        for j, (cert, qj) in enumerate(zip(certs, basis)):
            kron = float(np.max(np.abs(sys.V @ qj.coeffs.coeffs - np.eye(s)[:, j])))
            qj_norm = qj.max_norm
            qj_bound = _growth(2.0 * n / cert.delta, s)
            qj_bound_lemma = s * _growth(4.0 * n / cert.delta, s)
            distance = row_distance_certificate(sys, j, cert, qj=qj, tolerances=tol)
            angle = row_angle(sys, j, cert, distance=distance, tolerances=tol)
            checks.append(BoundCheck(f"max_i |Q_{j}(z_i) - delta_ij| <= kronecker_abs", "kronecker", kron, tol.kronecker_abs, "<=", 0.0))
            checks.append(BoundCheck(f"|Q_{j}| <= (2n/delta_{j})^(s-1)", "coefficient", qj_norm, qj_bound, "<=", tol.relative_slack))
            checks.append(BoundCheck(f"|Q_{j}| <= s(4n/delta_{j})^(s-1)", "coefficient", qj_norm, qj_bound_lemma, "<=", tol.relative_slack))
            checks.extend(distance.checks)
            checks.extend(angle.checks)
            per_node.append(
                NodeRecord(
                    j=j,
                    delta_j=cert.delta,
                    exact=cert.exact,
                    method=cert.method,
                    v=tuple(float(x) for x in cert.v),
                    dist_actual=distance.dist_actual,
                    dist_lower_via_cj=distance.dist_lower_via_cj,
                    dist_bound=distance.dist_bound,
                    sin_theta_actual=angle.sin_actual,
                    sin_theta_bound=angle.sin_bound,
                    row_norm=angle.row_norm,
                    qj_norm=qj_norm,
                    qj_bound=qj_bound,
                    qj_bound_lemma=qj_bound_lemma,
                    kronecker_residual=kron,
                )
            )

    with _stage("spectral"):
        spectral = spectral_certificate(sys, kappa_hat, tolerances=tol)
        checks.extend(spectral.checks)

    with _stage("right-inverse"):
        rinv_residual = kronecker_residual(sys, Vplus)
        rinv_norm = operator_norm(Vplus) if np.all(np.isfinite(Vplus)) else math.inf
        rinv_bound = s**1.5 * math.sqrt(nu) * _growth(4.0 * n / kappa_hat, s)
        pinv_norm = 1.0 / spectral.sigma_min if spectral.sigma_min > 0.0 else math.inf
        checks.append(BoundCheck("|V V+ - I|_max <= kronecker_abs", "kronecker", rinv_residual, tol.kronecker_abs, "<=", 0.0))
        checks.append(BoundCheck("|V+| <= s^(3/2) sqrt(nu) (4n/kappa)^(s-1)", "right_inverse", rinv_norm, rinv_bound, "<=", tol.relative_slack))
        if rinv_residual <= tol.kronecker_abs:
            relation = right_inverse_sigma_relation(sys, Vplus, sigma_min=spectral.sigma_min, tolerances=tol)
            checks.append(relation.check)

    interp_record: Optional[InterpolantRecord] = None
    if values is not None:
        with _stage("interpolant"):
            y = np.asarray(values, dtype=float)
            P = interpolant(Z, y, certs, N, basis=basis)
            ynorm = float(np.max(np.abs(y)))
            residual = float(np.max(np.abs(sys.V @ P.coeffs.coeffs - y)))
            bound_mid = s * ynorm * max(_growth(2.0 * n / c.delta, s) for c in certs)
            bound_theorem = s * s * ynorm * _growth(4.0 * n / kappa_hat, s)
            checks.append(BoundCheck("max_i |P(z_i) - y_i| <= kronecker_abs max(1, |y|)", "interpolant", residual, tol.kronecker_abs * max(1.0, ynorm), "<=", 0.0))
            checks.append(BoundCheck("|P| <= s|y| max_j (2n/delta_j)^(s-1)", "interpolant", P.max_norm, bound_mid, "<=", tol.relative_slack))
            checks.append(BoundCheck("|P| <= s^2 |y| (4n/kappa)^(s-1)", "interpolant", P.max_norm, bound_theorem, "<=", tol.relative_slack))
            interp_record = InterpolantRecord(
                values=tuple(float(v) for v in y),
                residual=residual,
                norm=P.max_norm,
                bound_mid=bound_mid,
                bound_theorem=bound_theorem,
                coeffs=tuple(float(c) for c in P.coeffs.coeffs),
            )

    all_pass = all(check.passed for check in checks) and spectral.rank == s
    for check in checks:
        if not check.passed:
            logger.error("certificate failed: %s", check.describe())

    global_record = GlobalRecord(
        s=s,
        n=n,
        N=N,
        nu=nu,
        kappa_hat=kappa_hat,
        kappa_exact=all(c.exact for c in certs),
        sigma_min_actual=spectral.sigma_min,
        sigma_min_bound=spectral.sigma_min_bound,
        sigma_max_actual=spectral.sigma_max,
        sigma_max_bound=spectral.sigma_max_bound,
        frobenius_norm=spectral.frobenius_norm,
        sigma_min_column_bound=spectral.sigma_min_column_bound,
        rinv_norm_actual=rinv_norm,
        rinv_norm_bound=rinv_bound,
        rinv_residual=rinv_residual,
        pinv_norm=pinv_norm,
        cond_actual=spectral.cond,
        cond_bound=spectral.cond_bound,
        rank=spectral.rank,
        full_rank_expected=s,
        kernel_dim=spectral.kernel_dim,
        all_pass=all_pass,
    )
    config = dict(config_echo) if config_echo is not None else {"N": N, "settings": settings.to_dict()}
    logger.info("s=%s n=%s N=%s nu=%s: %s checks, all_pass=%s", s, n, N, nu, len(checks), all_pass)
    return StabilityReport(
        config=config,
        per_node=tuple(per_node),
        global_=global_record,
        checks=tuple(checks),
        interpolant=interp_record,
    )
