import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ttw.core import ValidationError, WarpCoefficients, WarpingFunctions
from ttw.warp import DstBasis, boundary_violations, coefficients_to_warps, project_monotone, warp_jacobian

rows = st.integers(2, 30).flatmap(lambda T: arrays(np.float64, (3, T), elements=st.floats(-50, 50)))


def test_basis_endpoints_and_range():
    B = DstBasis(57, 16).matrix
    assert np.all(B[0] == 0) and np.all(B[-1] == 0)
    assert np.abs(B).max() <= 1.0


def test_basis_is_cached():
    assert DstBasis(40, 3).matrix is DstBasis(40, 3).matrix


def test_zero_coefficients_give_identity():
    tau = coefficients_to_warps(np.zeros((4, 5)), DstBasis(20, 5))
    np.testing.assert_array_equal(tau, np.tile(np.arange(1, 21.0), (4, 1)))


def test_single_component_example():
    tau = coefficients_to_warps(WarpCoefficients([[1.0]]), DstBasis(3, 1))
    np.testing.assert_allclose(tau, [[1.0, 3.0, 3.0]], atol=1e-15)


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        coefficients_to_warps(np.zeros((2, 3)), DstBasis(10, 4))


def test_boundaries_hold_before_projection(rng):
    T = 33
    tau = coefficients_to_warps(rng.normal(0, 10, (50, 8)), DstBasis(T, 8))
    assert np.all(tau[:, 0] == 1.0) and np.all(tau[:, -1] == T)


def test_linear_in_coefficients(rng):
    basis = DstBasis(25, 6)
    A1, A2 = rng.standard_normal((2, 3, 6))
    ident = np.arange(1, 26.0)
    lhs = coefficients_to_warps(A1 + A2, basis) - ident
    rhs = (coefficients_to_warps(A1, basis) - ident) + (coefficients_to_warps(A2, basis) - ident)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize(
    "row, expected",
    [
        ([1, 3, 2, 4], [1, 3, 3, 4]),
        ([1, 2, 2, 5], [1, 2, 2, 5]),
        ([1, 0.5, 0.2, 4], [1, 1, 1, 4]),
    ],
)
def test_projection_examples(row, expected):
    np.testing.assert_array_equal(project_monotone(np.array([row], float)), [expected])


def sequential_clamp(tau):
    out = np.array(tau, dtype=float)
    for row in out:
        for t in range(1, row.size):
            if row[t] < row[t - 1]:
                row[t] = row[t - 1]
    return out


@given(rows)
def test_projection_matches_sequential_rule(tau):
    np.testing.assert_array_equal(project_monotone(tau), sequential_clamp(tau))


@given(rows)
def test_projection_properties(tau):
    p = project_monotone(tau)
    assert np.all(np.diff(p, axis=1) >= 0)
    np.testing.assert_array_equal(project_monotone(p), p)
    assert np.all(p >= tau)
    np.testing.assert_array_equal(p[:, 0], tau[:, 0])


def test_projection_accepts_warping_functions():
    w = WarpingFunctions([[1.0, 0.0, 3.0]])
    np.testing.assert_array_equal(project_monotone(w), [[1.0, 1.0, 3.0]])


def test_boundary_violation_counter():
    tau = np.array([[1.0, 5.0, 4.0], [1.0, 2.0, 3.0]])
    assert boundary_violations(project_monotone(tau)) == 1


def test_jacobian():
    J = warp_jacobian(DstBasis(3, 2))
    assert J.shape == (3, 2)
    assert np.all(J[0] == 0) and np.all(np.abs(J[-1]) <= 1e-12)
    assert J[1, 0] == pytest.approx(1.0)
