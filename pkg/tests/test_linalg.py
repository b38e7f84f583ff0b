import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vanderbound.core.errors import ContractViolation, ConvergenceError
from vanderbound.core.linalg import (
    column_distances,
    distance_to_span,
    jacobi_eigh,
    operator_norm,
    rank_estimate,
    sigma_min_from_column_distances,
    singular_values,
    span_projection,
    vector_norm,
)
from vanderbound.certify.evaluation.oracle import exact_squared_distance_to_span

MATRIX_DIMENSION = 5
SQRT2 = math.sqrt(2.0)
entries = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def test_jacobi_two_by_two():
    lam, Q = jacobi_eigh([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(lam, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(Q[:, 0]), [math.sqrt(0.5)] * 2)


@seed(1)
@settings(deadline=None, max_examples=60)
@given(A=arrays(np.float64, (MATRIX_DIMENSION, MATRIX_DIMENSION), elements=entries))
def test_jacobi_reconstructs_symmetric_matrices(A):
    S = A + A.T
    lam, Q = jacobi_eigh(S)
    scale = max(np.linalg.norm(S), 1.0)
    assert np.linalg.norm(Q @ np.diag(lam) @ Q.T - S) <= 1e-9 * scale
    np.testing.assert_allclose(Q.T @ Q, np.eye(MATRIX_DIMENSION), atol=1e-12)
    assert np.all(np.diff(lam) <= 0.0)


def test_jacobi_rejects_non_symmetric_and_non_square():
    with pytest.raises(ContractViolation):
        jacobi_eigh([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ContractViolation):
        jacobi_eigh([[1.0, 2.0, 3.0]])


def test_jacobi_sweep_limit():
    with pytest.raises(ConvergenceError):
        jacobi_eigh([[1.0, 1.0], [1.0, 1.0]], max_sweeps=0)


def test_singular_values_match_svd():
    rng = np.random.default_rng(9)
    for shape in [(3, 7), (6, 4), (5, 5), (1, 4)]:
        M = rng.standard_normal(shape)
        expected = np.linalg.svd(M, compute_uv=False)
        np.testing.assert_allclose(singular_values(M), expected, rtol=0, atol=1e-12 * expected[0])


def test_small_singular_values_keep_relative_accuracy():
    U, _ = np.linalg.qr(np.random.default_rng(4).standard_normal((3, 3)))
    M = U @ np.diag([1.0, 1e-4, 1e-7])
    sigma = singular_values(M)
    assert sigma[-1] == pytest.approx(1e-7, rel=1e-6)


def test_two_node_vandermonde_spectrum():
    V = np.array([[1.0, -0.5], [1.0, 0.5]])
    np.testing.assert_allclose(singular_values(V), [math.sqrt(2.0), math.sqrt(0.5)], atol=1e-12)
    assert operator_norm([[0.5, 0.5], [-1.0, 1.0]]) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_span_projection():
    assert distance_to_span([3.0, 4.0], []) == 5.0
    assert distance_to_span([1.0, 0.0, 0.0], [[0.0, 1.0, 0.0]]) == pytest.approx(1.0)
    assert distance_to_span([1.0, 2.0, 0.0], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]) == pytest.approx(0.0, abs=1e-14)
    projection = span_projection([1.0, -0.5], [[1.0, 0.5]])
    assert projection.distance == pytest.approx(math.sqrt(0.8), abs=1e-14)
    assert projection.coefficients == pytest.approx([0.6])
    assert 0.0 < projection.rounding < 1e-14


def test_span_projection_with_dependent_vectors():
    # duplicated span vectors fall below the eigenvalue cutoff
    d = distance_to_span([0.0, 0.0, 2.0], [[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    assert d == pytest.approx(2.0, abs=1e-12)


def test_span_projection_length_mismatch():
    with pytest.raises(ContractViolation):
        span_projection([1.0, 2.0], [[1.0, 0.0, 0.0]])


def test_rank_estimate():
    assert rank_estimate([[1.0, 2.0], [2.0, 4.0]]) == 1
    assert rank_estimate(np.eye(3)) == 3
    assert rank_estimate(np.zeros((2, 2))) == 0


def test_column_distances_and_sigma_min_bound():
    np.testing.assert_allclose(column_distances(np.eye(3)), [1.0, 1.0, 1.0])
    assert sigma_min_from_column_distances(np.eye(3)) == pytest.approx(1.0 / math.sqrt(3.0))
    V = np.array([[1.0, -0.5], [1.0, 0.5]])
    assert sigma_min_from_column_distances(V.T) == pytest.approx(math.sqrt(0.4), abs=1e-12)


def test_rejects_non_finite_and_empty():
    with pytest.raises(ContractViolation):
        singular_values([[np.inf, 0.0]])
    with pytest.raises(ContractViolation):
        singular_values(np.zeros((0, 3)))


def test_vector_norm_survives_extreme_scales():
    assert vector_norm([3e-200, 4e-200]) == pytest.approx(5e-200, rel=1e-15)
    assert vector_norm([3e200, 4e200]) == pytest.approx(5e200, rel=1e-15)
    assert vector_norm([]) == 0.0
    assert vector_norm([0.0, 0.0]) == 0.0
    assert math.isnan(vector_norm([1.0, np.nan]))
    assert vector_norm([1.0, -np.inf]) == math.inf


def test_singular_values_of_scaled_matrices():
    V = np.array([[1.0, -0.5], [1.0, 0.5]])
    for scale in (1e-200, 1e200):
        np.testing.assert_allclose(singular_values(scale * V), scale * np.array([SQRT2, math.sqrt(0.5)]), rtol=1e-12)
    np.testing.assert_array_equal(singular_values(np.zeros((2, 3))), [0.0, 0.0])
    # a tiny second row keeps its own singular value
    sigma = singular_values([[1.0, 0.0], [1.0, 1e-300]])
    assert sigma[-1] == pytest.approx(1e-300 / SQRT2, rel=1e-9)


@seed(3)
@settings(deadline=None, max_examples=60)
@given(
    rows=st.integers(min_value=1, max_value=8),
    cols=st.integers(min_value=1, max_value=32),
    draw_seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_transpose_has_the_same_spectrum(rows, cols, draw_seed):
    M = np.random.default_rng(draw_seed).standard_normal((rows, cols))
    a = singular_values(M)
    np.testing.assert_allclose(singular_values(M.T), a, rtol=0, atol=1e-12 * a[0])


@seed(4)
@settings(deadline=None, max_examples=60)
@given(
    cols=st.integers(min_value=1, max_value=8),
    extra=st.integers(min_value=0, max_value=24),
    draw_seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_column_distance_bound_stays_below_sigma_min(cols, extra, draw_seed):
    M = np.random.default_rng(draw_seed).standard_normal((cols + extra, cols))
    assert sigma_min_from_column_distances(M) <= singular_values(M)[-1] + 1e-9


@seed(6)
@settings(deadline=None, max_examples=80)
@given(
    x=st.lists(st.integers(min_value=-8, max_value=8), min_size=6, max_size=6),
    B=st.lists(st.lists(st.integers(min_value=-8, max_value=8), min_size=6, max_size=6), max_size=3),
)
def test_distance_matches_exact_rational_distance(x, B):
    exact = math.sqrt(float(exact_squared_distance_to_span(x, B)))
    assert distance_to_span(np.array(x, dtype=float) / 8, np.array(B, dtype=float).reshape(-1, 6) / 8) == pytest.approx(exact / 8, abs=1e-8)
