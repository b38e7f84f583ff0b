import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from vanderbound.core.errors import ContractViolation, InvalidNodeSetError
from vanderbound.core.univariate import (
    CoeffVector,
    UnivariateNodes,
    check_lemma_univariate,
    divided_differences,
    elementary_symmetric,
    horner,
    interpolate,
    lagrange_basis_coeffs,
    lagrange_coeffs,
    product_coeffs,
)


def test_nodes_validation():
    nodes = UnivariateNodes((-0.5, 0.5, 0.0))
    assert nodes.s == 3
    assert nodes.kappa_1d == 0.5
    with pytest.raises(InvalidNodeSetError) as exc:
        UnivariateNodes((0.1, 1.5))
    assert exc.value.index == 1
    with pytest.raises(InvalidNodeSetError):
        UnivariateNodes((0.25, 0.25))


def test_single_node_has_infinite_gap():
    assert UnivariateNodes((0.3,)).kappa_1d == float("inf")


def test_elementary_symmetric_and_products():
    np.testing.assert_allclose(elementary_symmetric([1.0, 2.0, 3.0]), [1.0, 6.0, 11.0, 6.0])
    np.testing.assert_allclose(product_coeffs([1.0, 2.0]), [2.0, -3.0, 1.0])
    np.testing.assert_allclose(product_coeffs([]), [1.0])


def test_divided_differences_and_newton_form():
    nodes = UnivariateNodes((-1.0, 0.0, 1.0))
    np.testing.assert_allclose(divided_differences(nodes, [1.0, 0.0, 1.0]), [1.0, -1.0, 1.0])
    np.testing.assert_allclose(interpolate(nodes, [1.0, 0.0, 1.0]).coeffs, [0.0, 0.0, 1.0], atol=1e-15)


def test_two_node_lagrange_basis():
    nodes = UnivariateNodes((-0.5, 0.5))
    np.testing.assert_allclose(lagrange_basis_coeffs(nodes, 0).coeffs, [0.5, -1.0])
    np.testing.assert_allclose(lagrange_basis_coeffs(nodes, 1).coeffs, [0.5, 1.0])
    with pytest.raises(IndexError):
        lagrange_basis_coeffs(nodes, 2)


def test_lagrange_coeffs_tolerates_coinciding_other_nodes():
    # only t_j has to differ from the others
    coeffs = lagrange_coeffs([0.5, -0.5, -0.5], 0)
    assert horner(coeffs, 0.5) == pytest.approx(1.0)
    assert horner(coeffs, -0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ContractViolation):
        lagrange_coeffs([0.5, 0.5], 0)


def test_coeff_vector_is_read_only():
    c = CoeffVector([1.0, -3.0])
    assert c.max_norm == 3.0
    assert c.degree == 1
    assert c(2.0) == -5.0
    with pytest.raises(ValueError):
        c.coeffs[0] = 2.0


def test_interpolation_matches_data():
    rng = np.random.default_rng(3)
    t = np.sort(rng.uniform(-1, 1, 6))
    y = rng.uniform(-1, 1, 6)
    p = interpolate(UnivariateNodes(tuple(t)), y)
    np.testing.assert_allclose([p(x) for x in t], y, atol=1e-9)


@seed(2024)
@settings(deadline=None, max_examples=200)
@given(
    ticks=st.lists(st.integers(min_value=-1000, max_value=1000), min_size=2, max_size=8, unique=True),
    data=st.data(),
)
def test_coefficient_bounds_hold(ticks, data):
    t = [k / 1000 for k in ticks]
    y = data.draw(st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False), min_size=len(t), max_size=len(t)))
    cert = check_lemma_univariate(UnivariateNodes(tuple(t)), y)
    assert cert.passed, [c.describe() for c in cert.violations]
    assert len(cert.checks) == 2 * len(t) + 1


def test_tight_divided_difference_passes():
    cert = check_lemma_univariate(UnivariateNodes((-1.0, 1.0)), [1.0, -1.0])
    assert cert.passed
    delta_check = next(c for c in cert.checks if c.name == "|Delta_1|")
    assert delta_check.actual == delta_check.bound == 1.0


def test_wrong_number_of_values():
    with pytest.raises(ContractViolation):
        check_lemma_univariate(UnivariateNodes((-1.0, 1.0)), [1.0])


@seed(77)
@settings(deadline=None, max_examples=100)
@given(
    ticks=st.lists(st.integers(min_value=-1000, max_value=1000), min_size=1, max_size=7, unique=True),
    data=st.data(),
)
def test_lagrange_basis_is_a_partition_of_unity(ticks, data):
    nodes = UnivariateNodes(tuple(k / 1000 for k in ticks))
    s = nodes.s
    basis = np.array([lagrange_basis_coeffs(nodes, j).coeffs for j in range(s)])
    scale = max(1.0, float(np.max(np.abs(basis))))
    np.testing.assert_allclose(basis.sum(axis=0), np.eye(1, s)[0], atol=1e-10 * scale)

    y = np.array(data.draw(st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False), min_size=s, max_size=s)))
    newton = interpolate(nodes, y).coeffs
    np.testing.assert_allclose(y @ basis, newton, atol=1e-8 * scale)
