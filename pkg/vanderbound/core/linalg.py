"""Dense kernels sized for desk-scale certification.

Spectra come from a cyclic Jacobi eigensolver on the smaller Gram matrix; the
square-root loss of the Gram route is undone by re-evaluating each singular
value on its eigenvector. Distances to spans use the Gram normal equations
with an eigen pseudo-solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ContractViolation, ConvergenceError

EPS = float(np.finfo(float).eps)

MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-12
SYMMETRY_TOL = 1e-12
EIGEN_CUTOFF = 1e-12
RANK_TOL = 1e-10
MAX_ORDER = 64


def _as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2 or A.size == 0:
        raise ContractViolation(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractViolation("matrix entries must be finite")
    return A


def vector_norm(x) -> float:
    """Euclidean norm taken after dividing by the largest entry; the squares cannot under- or overflow."""

    xv = np.asarray(x, dtype=float).ravel()
    if xv.size == 0:
        return 0.0
    peak = float(np.max(np.abs(xv)))
    if peak == 0.0 or not math.isfinite(peak):
        return peak
    return peak * math.sqrt(float(np.sum((xv / peak) ** 2)))


def row_norms(M) -> np.ndarray:
    return np.array([vector_norm(row) for row in np.atleast_2d(np.asarray(M, dtype=float))])


def jacobi_eigh(S, *, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a symmetric matrix by row-cyclic Jacobi rotations.

    Returns (eigenvalues descending, eigenvectors as columns).
    """

    A = _as_matrix(S)
    m = A.shape[0]
    if A.shape != (m, m):
        raise ContractViolation(f"jacobi_eigh needs a square matrix, got {A.shape}")
    scale = float(np.linalg.norm(A))
    if np.max(np.abs(A - A.T)) > SYMMETRY_TOL * max(scale, 1.0):
        raise ContractViolation("jacobi_eigh needs a symmetric matrix")
    A = 0.5 * (A + A.T)
    V = np.eye(m)

    def off_norm() -> float:
        return float(np.linalg.norm(A - np.diag(np.diag(A))))

    def sweep() -> None:
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0

                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq

    threshold = tol * scale
    sweeps = 0
    while off_norm() > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off_norm():.3e})")
        sweeps += 1
        sweep()
    # one sweep past the threshold: entries coupling the smallest eigenvalues
    # must end far below it for the singular value refinement
    if off_norm() > 0.0:
        sweep()

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], V[:, order]


def singular_values(M) -> np.ndarray:
    """Descending singular values via the smaller Gram matrix.

    M is first divided by its largest entry. Each value is re-evaluated as the
    norm of M^T q (or M q) on its Gram eigenvector, which is sqrt of the
    Rayleigh quotient and keeps small values accurate relative to sigma_1.
    """

    A = _as_matrix(M)
    rows, cols = A.shape
    if min(rows, cols) > MAX_ORDER:
        raise ContractViolation(f"singular_values supports min(rows, cols) <= {MAX_ORDER}, got {min(rows, cols)}")
    scale = float(np.max(np.abs(A)))
    if scale == 0.0:
        return np.zeros(min(rows, cols))
    A = A / scale
    if rows <= cols:
        _, Q = jacobi_eigh(A @ A.T)
        sigma = row_norms((A.T @ Q).T)
    else:
        _, Q = jacobi_eigh(A.T @ A)
        sigma = row_norms((A @ Q).T)
    return scale * np.sort(np.maximum(sigma, 0.0))[::-1]


def operator_norm(M) -> float:
    return float(singular_values(M)[0])


@dataclass(frozen=True)
class SpanProjection:
    """Residual of x against span(B): distance, coefficients, rounding scale."""

    distance: float
    coefficients: np.ndarray
    rounding: float


def span_projection(x, B: Sequence, *, cutoff: float = EIGEN_CUTOFF) -> SpanProjection:
    """Project x onto span(B) through the Gram system G c = B x.

    Eigenvalues below cutoff * lambda_max are dropped (pseudo-solve); one step
    of iterative refinement follows. `rounding` is eps * (|x| + sum |c_k||b_k|),
    the scale of floating error in the residual.
    """

    xv = np.asarray(x, dtype=float).ravel()
    basis = np.asarray(B, dtype=float)
    if basis.size == 0:
        norm = vector_norm(xv)
        return SpanProjection(distance=norm, coefficients=np.zeros(0), rounding=EPS * norm)
    basis = np.atleast_2d(basis)
    if basis.shape[1] != xv.shape[0]:
        raise ContractViolation(f"span vectors have length {basis.shape[1]}, x has length {xv.shape[0]}")
    if basis.shape[0] > MAX_ORDER:
        raise ContractViolation(f"span_projection supports at most {MAX_ORDER} vectors")

    lam, Q = jacobi_eigh(basis @ basis.T)
    keep = lam > cutoff * lam[0] if lam[0] > 0 else np.zeros_like(lam, dtype=bool)
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]

    def solve(rhs: np.ndarray) -> np.ndarray:
        return Q @ (inv * (Q.T @ rhs))

    coeffs = solve(basis @ xv)
    residual = xv - basis.T @ coeffs
    coeffs = coeffs + solve(basis @ residual)
    residual = xv - basis.T @ coeffs

    scale = vector_norm(xv) + float(np.sum(np.abs(coeffs) * row_norms(basis)))
    return SpanProjection(
        distance=vector_norm(residual),
        coefficients=coeffs,
        rounding=EPS * scale,
    )


def distance_to_span(x, B: Sequence, *, cutoff: float = EIGEN_CUTOFF) -> float:
    """Euclidean distance from x to span(B); |x| when B is empty."""

    return span_projection(x, B, cutoff=cutoff).distance


def rank_estimate(M, tol_rel: float = RANK_TOL) -> int:
    sigma = singular_values(M)
    if sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > tol_rel * sigma[0]))


def column_distances(M) -> np.ndarray:
    """dist(C_j, span of the other columns) for every column."""

    A = _as_matrix(M)
    m = A.shape[1]
    cols = A.T
    return np.array([distance_to_span(cols[j], np.delete(cols, j, axis=0)) for j in range(m)])


def sigma_min_from_column_distances(M) -> float:
    """Lower bound sigma_min(M) >= min_j dist(C_j, W_j) / sqrt(m) for m columns."""

    A = _as_matrix(M)
    return float(np.min(column_distances(A))) / math.sqrt(A.shape[1])
