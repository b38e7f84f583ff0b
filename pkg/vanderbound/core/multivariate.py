"""Multivariate Lagrange polynomials built from a projection direction.

Q_j(z) = p_j(<v, z>), where p_j is the univariate Lagrange basis polynomial on
the projected nodes t_i = <v, z_i>. The multinomial theorem turns the
univariate coefficients a_k into c_alpha = a_|alpha| C(|alpha|; alpha) v^alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation, DegreeError, StaleCertificateError
from .geometry import DirectionCertificate, NodeSet, recompute_gap
from .multiindex import MonomialOrder, monomial_order
from .univariate import CoeffVector, lagrange_coeffs

STALE_TOL = 1e-9


@dataclass(frozen=True)
class MultivariatePolynomial:
    order: MonomialOrder
    coeffs: CoeffVector

    def __post_init__(self) -> None:
        if not isinstance(self.coeffs, CoeffVector):
            object.__setattr__(self, "coeffs", CoeffVector(self.coeffs))
        if len(self.coeffs) != self.order.size:
            raise ContractViolation(f"expected {self.order.size} coefficients, got {len(self.coeffs)}")

    @property
    def max_norm(self) -> float:
        return self.coeffs.max_norm

    @property
    def total_degree(self) -> int:
        nonzero = np.nonzero(self.coeffs.coeffs)[0]
        return int(self.order.degrees[nonzero].max()) if nonzero.size else 0

    def __call__(self, z: Sequence[float]) -> float:
        return evaluate(self, z)

    def __add__(self, other: "MultivariatePolynomial") -> "MultivariatePolynomial":
        if other.order != self.order:
            raise ContractViolation("cannot add polynomials over different monomial orders")
        return MultivariatePolynomial(self.order, CoeffVector(self.coeffs.coeffs + other.coeffs.coeffs))

    def scaled(self, factor: float) -> "MultivariatePolynomial":
        return MultivariatePolynomial(self.order, CoeffVector(factor * self.coeffs.coeffs))


def zero_polynomial(order: MonomialOrder) -> MultivariatePolynomial:
    return MultivariatePolynomial(order, CoeffVector(np.zeros(order.size)))


def compose_linear(p: Sequence[float], v: Sequence[float], order: MonomialOrder) -> MultivariatePolynomial:
    """Monomial expansion of z -> p(<v, z>)."""

    a = np.asarray(p.coeffs if isinstance(p, CoeffVector) else p, dtype=float).ravel()
    direction = np.asarray(v, dtype=float).ravel()
    if direction.shape[0] != order.n:
        raise ContractViolation(f"direction has {direction.shape[0]} coordinates, order has n = {order.n}")
    d = a.shape[0] - 1
    if d > order.N:
        raise DegreeError(f"univariate degree {d} exceeds order degree N = {order.N}")

    # v^alpha over the first d+1 degrees only; higher coefficients stay exactly 0
    width = int(np.searchsorted(order.degrees, d, side="right"))
    table = order.power_table(direction, degree=d)
    powers = np.ones(width)
    for ell in range(order.n):
        powers *= table[ell][order.exponents[:width, ell]]

    coeffs = np.zeros(order.size)
    coeffs[:width] = a[order.degrees[:width]] * order.multinomials[:width] * powers
    return MultivariatePolynomial(order, CoeffVector(coeffs))


def lagrange_polynomial(
    Z: NodeSet,
    j: int,
    cert: DirectionCertificate,
    N: int,
    *,
    stale_tol: float = STALE_TOL,
) -> MultivariatePolynomial:
    """Q_j with Q_j(z_i) = delta_ij and degree <= s - 1.

    The certificate gap is recomputed first; a drift above `stale_tol` means
    the certificate belongs to other nodes.
    """

    Z.check_index(j)
    if N < Z.s - 1:
        raise DegreeError(f"degree N = {N} is below s - 1 = {Z.s - 1}")
    if cert.delta <= 0.0:
        raise ContractViolation(f"certificate for node {j} has non-positive gap {cert.delta!r}")
    gap = recompute_gap(Z, j, cert.v)
    if abs(gap - cert.delta) > stale_tol:
        raise StaleCertificateError(f"certificate gap {cert.delta!r} does not match recomputed {gap!r} for node {j}")

    t = Z.points @ np.asarray(cert.v, dtype=float)
    return compose_linear(lagrange_coeffs(t, j), cert.v, monomial_order(Z.n, N))


def interpolant(
    Z: NodeSet,
    y: Sequence[float],
    certs: Sequence[DirectionCertificate],
    N: int,
    *,
    basis: Optional[Sequence[MultivariatePolynomial]] = None,
    stale_tol: float = STALE_TOL,
) -> MultivariatePolynomial:
    """P = sum_j y_j Q_j; pass `basis` to reuse already built Q_j."""

    values = np.asarray(y, dtype=float).ravel()
    if values.shape[0] != Z.s:
        raise ContractViolation(f"expected {Z.s} values, got {values.shape[0]}")
    if len(certs) != Z.s:
        raise ContractViolation(f"expected {Z.s} certificates, got {len(certs)}")
    if N < Z.s - 1:
        raise DegreeError(f"degree N = {N} is below s - 1 = {Z.s - 1}")
    if basis is None:
        basis = [lagrange_polynomial(Z, j, certs[j], N, stale_tol=stale_tol) for j in range(Z.s)]
    order = monomial_order(Z.n, N)
    coeffs = np.zeros(order.size)
    for y_j, q in zip(values, basis):
        if y_j != 0.0:
            coeffs += y_j * q.coeffs.coeffs
    return MultivariatePolynomial(order, CoeffVector(coeffs))


def evaluate(P: MultivariatePolynomial, z: Sequence[float]) -> float:
    """sum_alpha c_alpha z^alpha, summed in graded order."""

    point = np.asarray(z, dtype=float).ravel()
    if point.shape[0] != P.order.n:
        raise ContractViolation(f"point has {point.shape[0]} coordinates, polynomial has n = {P.order.n}")
    row = P.order.monomials(point[None, :])[0]
    total = 0.0
    for c, m in zip(P.coeffs.coeffs, row):
        total += c * m
    return float(total)


def evaluate_many(P: MultivariatePolynomial, points: np.ndarray) -> np.ndarray:
    return np.array([evaluate(P, z) for z in np.atleast_2d(points)])
