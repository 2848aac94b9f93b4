import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ttw.core import (
    AlignmentResult,
    LabeledDataset,
    TimeSeries,
    ValidationError,
    WarpCoefficients,
    WarpingFunctions,
    validate_dataset,
    within_group_loss,
)

# keep squares of differences clear of underflow
finite = st.floats(-1e3, 1e3).filter(lambda v: v == 0 or abs(v) > 1e-100)
matrices = st.tuples(st.integers(1, 6), st.integers(2, 12)).flatmap(lambda s: arrays(np.float64, s, elements=finite))


def test_loss_identical_rows():
    loss, y = within_group_loss([[1, 2, 3], [1, 2, 3]])
    assert loss == 0.0
    np.testing.assert_array_equal(y, [1, 2, 3])


def test_loss_single_row():
    x = np.array([[3.0, -1.0, 2.5]])
    loss, y = within_group_loss(x)
    assert loss == 0.0
    np.testing.assert_array_equal(y, x[0])


def test_loss_hand_example():
    loss, y = within_group_loss([[0, 2], [2, 0]])
    np.testing.assert_array_equal(y, [1, 1])
    assert loss == 1.0


def test_loss_rejects_nonfinite():
    with pytest.raises(ValidationError) as err:
        within_group_loss([[0, 1, 2], [0, np.inf, 2]])
    assert err.value.index == (2, 2)


@given(matrices)
def test_loss_zero_iff_rows_identical(X):
    loss, _ = within_group_loss(X)
    identical = np.all(X == X[0])
    scale = max(1.0, np.abs(X).max()) ** 2
    if identical:
        assert loss <= 1e-12 * scale
    else:
        assert loss > 0.0


@settings(max_examples=50)
@given(matrices, st.randoms(use_true_random=False))
def test_loss_permutation_invariant(X, r):
    perm = list(range(X.shape[0]))
    r.shuffle(perm)
    a, ya = within_group_loss(X)
    b, yb = within_group_loss(X[perm])
    assert b == pytest.approx(a, rel=1e-12, abs=1e-12)
    np.testing.assert_allclose(yb, ya, rtol=1e-12, atol=1e-12)


@given(matrices, st.floats(-100, 100))
def test_loss_shift(X, c):
    a, ya = within_group_loss(X)
    b, yb = within_group_loss(X + c)
    # cancellation in (x + c) - (y + c) costs digits proportional to the magnitudes
    scale = (np.abs(X).max() + abs(c)) ** 2
    assert b == pytest.approx(a, abs=1e-12 * scale)
    np.testing.assert_allclose(yb, ya + c, rtol=1e-12, atol=1e-12 * (np.abs(X).max() + abs(c)))


def test_validate_ok():
    validate_dataset([np.zeros(50)] * 3)


def test_validate_length_mismatch():
    with pytest.raises(ValidationError, match="length mismatch") as err:
        validate_dataset([np.zeros(50), np.zeros(49)])
    assert err.value.index == 2


def test_validate_nan_location():
    x = np.zeros((2, 10))
    x[0, 6] = np.nan
    with pytest.raises(ValidationError) as err:
        validate_dataset(x)
    assert err.value.index == (1, 7)


def test_validate_labels_count():
    with pytest.raises(ValidationError):
        validate_dataset(np.zeros((3, 4)), labels=[1, 2])


def test_types_are_immutable():
    ds = LabeledDataset(np.ones((2, 3)), [0, 1])
    with pytest.raises(ValueError):
        ds.series[0, 0] = 5
    with pytest.raises(ValidationError):
        TimeSeries([1.0])
    with pytest.raises(ValidationError):
        WarpCoefficients(np.zeros((2, 0)))


def test_warping_functions_checks():
    w = WarpingFunctions([[1, 1.5, 3], [1, 3, 3.5]])
    np.testing.assert_array_equal(w.boundary_ok(), [True, False])
    np.testing.assert_array_equal(w.is_monotone(), [True, True])


def test_alignment_result_rejects_bad_trace():
    kw = dict(
        synchronized=np.zeros((1, 3)),
        centroid=np.zeros(3),
        warps=WarpingFunctions([[1, 2, 3]]),
        coefficients=WarpCoefficients([[0.0]]),
    )
    with pytest.raises(ValidationError):
        AlignmentResult(loss_trace=[], **kw)
    with pytest.raises(ValidationError):
        AlignmentResult(loss_trace=[-1.0], **kw)
