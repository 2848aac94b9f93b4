import numpy as np
import pytest

from ttw.core import LabeledDataset, ValidationError
from ttw.dtw import dtw_sum
from ttw.pipeline import (
    average_avg,
    average_ttw,
    averaging_experiment,
    classify,
    fit_nearest_centroid,
    stratified_halves,
    tune_k,
)
from ttw.synthetic import bumps, two_class, warped_set
from ttw.trainer import TrainConfig

FAST = TrainConfig(iterations=40)


@pytest.mark.parametrize(
    "X, expected",
    [([[0, 2], [2, 0]], [1, 1]), ([[3, 4, 5]], [3, 4, 5]), ([[1, 1], [1, 1], [4, 4]], [2, 2])],
)
def test_average_avg(X, expected):
    np.testing.assert_allclose(average_avg(np.array(X, float)), expected, rtol=1e-15)


def test_average_ttw_identical(rng):
    x = rng.standard_normal(30)
    c, res = average_ttw(np.vstack([x, x, x]), FAST)
    np.testing.assert_array_equal(c, x)
    assert np.all(res.loss_trace == 0)


def test_average_ttw_single(rng):
    x = rng.standard_normal(30)
    c, _ = average_ttw(x[None], FAST)
    np.testing.assert_array_equal(c, x)


def test_ttw_beats_avg_on_shifted_copies():
    T = 64
    t = np.arange(1, T + 1, dtype=float)
    B = np.sin(np.pi * (t - 1) / (T - 1))
    X = LabeledDataset(np.vstack([bumps(t + s * B, T) for s in (-4, -2, 0, 2, 4)]))
    c, _ = average_ttw(X, TrainConfig(K=4))
    assert dtw_sum(c, X) <= dtw_sum(average_avg(X), X)


def test_tune_k_identical_picks_smallest(rng):
    x = rng.standard_normal(24)
    best, scores = tune_k(np.vstack([x, x]), cfg_base=FAST)
    assert best == 1
    assert set(scores) == {1, 2, 4, 8, 16} and all(v == 0 for v in scores.values())


def test_tune_k_single_grid(rng):
    best, scores = tune_k(rng.standard_normal((3, 20)), grid=[8], cfg_base=FAST)
    assert best == 8 and list(scores) == [8]


def test_tune_k_empty_grid(rng):
    with pytest.raises(ValidationError):
        tune_k(rng.standard_normal((3, 20)), grid=[])


def test_tune_k_finds_low_order_warps():
    # two-component warps of moderate size (coefficients up to 2 samples)
    picks = []
    for seed in range(10):
        X = warped_set(np.random.default_rng(seed), 10, 64, amplitude=2.0)
        picks.append(tune_k(X)[0])
    assert sum(k in (2, 4) for k in picks) >= 8, picks


def test_stratified_halves():
    ds = LabeledDataset(np.arange(14, dtype=float).reshape(7, 2), [0, 0, 0, 1, 1, 1, 1])
    a, b = stratified_halves(ds, seed=3)
    assert sorted(a.labels.tolist()) == [0, 0, 1, 1]
    assert sorted(b.labels.tolist()) == [0, 1, 1]
    rows = {tuple(r) for r in a.series} | {tuple(r) for r in b.series}
    assert len(rows) == 7
    again = stratified_halves(ds, seed=3)
    np.testing.assert_array_equal(again[0].series, a.series)


def test_classify_exact_match_and_ties():
    cents = {0: np.array([0.0, 0.0, 0.0]), 1: np.array([2.0, 2.0, 2.0])}
    test = LabeledDataset(np.array([[2.0, 2.0, 2.0], [1.0, 1.0, 1.0], [0.0, 0.0, 0.0]]), [1, 1, 0])
    rep = classify(cents, test)
    np.testing.assert_array_equal(rep.predictions, [1, 0, 0])
    assert rep.accuracy == pytest.approx(2 / 3)
    np.testing.assert_array_equal(rep.confusion, [[1, 0], [1, 1]])
    np.testing.assert_array_equal(rep.confusion.sum(axis=1), np.bincount(test.labels))


def test_classify_needs_a_centroid():
    with pytest.raises(ValidationError):
        classify([], LabeledDataset(np.zeros((1, 3)), [0]))


def test_one_class_model(rng):
    ds = LabeledDataset(rng.standard_normal((4, 20)), [5] * 4)
    model = fit_nearest_centroid(ds, None, grid=[1, 2], cfg_base=FAST)
    assert model.labels == [5] and len(model.centroids) == 1
    rep = classify(model, ds)
    assert rep.accuracy == 1.0


def test_missing_class_in_training(rng):
    train_ds = LabeledDataset(rng.standard_normal((4, 20)), [0] * 4)
    val = LabeledDataset(rng.standard_normal((2, 20)), [0, 1])
    with pytest.raises(ValidationError, match="class 1"):
        fit_nearest_centroid(train_ds, val, grid=[1], cfg_base=FAST)


def test_empty_validation_falls_back(rng):
    ds = two_class(rng, 6, 48)
    model = fit_nearest_centroid(ds, None, grid=[1, 2], cfg_base=FAST)
    assert model.tuning == "dtw_sum"
    assert any("no validation" in line for line in model.trail)


def test_two_class_accuracy():
    rng = np.random.default_rng(7)
    train_ds, test = two_class(rng, 20, 64), two_class(rng, 20, 64)
    fit, val = stratified_halves(train_ds, seed=7)
    model = fit_nearest_centroid(fit, val)
    assert model.tuning == "validation"
    rep = classify(model, test)
    assert rep.accuracy >= 0.95
    # guard: centroids also classify their own source data above chance
    assert classify(model, train_ds).accuracy > 0.5


def test_averaging_experiment_shape():
    rng = np.random.default_rng(1)
    ds = LabeledDataset(np.vstack([warped_set(rng, 12, 32), warped_set(rng, 12, 32, template=lambda s, T: -bumps(s, T))]),
                        [0] * 12 + [1] * 12)
    reports = averaging_experiment(ds, 10, 10, cfg=TrainConfig(K=4, iterations=20), seed=3, n_jobs=2)
    assert [(r.label, r.method) for r in reports] == [(0, "ttw"), (0, "avg"), (1, "ttw"), (1, "avg")]
    assert all(len(r.per_set_dtw_sum) == 10 for r in reports)
    for r in reports:
        assert r.mean_dtw_sum == pytest.approx(np.mean(r.per_set_dtw_sum))
    again = averaging_experiment(ds, 10, 10, cfg=TrainConfig(K=4, iterations=20), seed=3)
    assert [r.per_set_dtw_sum for r in again] == [r.per_set_dtw_sum for r in reports]


def test_averaging_experiment_singletons(rng):
    ds = LabeledDataset(rng.standard_normal((5, 16)), [0] * 5)
    reports = averaging_experiment(ds, 3, 1, cfg=FAST, seed=0)
    assert all(v == 0.0 for r in reports for v in r.per_set_dtw_sum)


def test_averaging_experiment_small_class(rng):
    ds = LabeledDataset(rng.standard_normal((3, 16)), [0] * 3)
    with pytest.raises(ValidationError, match="replace"):
        averaging_experiment(ds, 2, 5, cfg=FAST)
    reports = averaging_experiment(ds, 2, 5, cfg=FAST, replace=True)
    assert all(r.with_replacement for r in reports)


def test_identical_sets_give_identical_centroids(rng):
    x = rng.standard_normal(20)
    X = np.vstack([x] * 4)
    np.testing.assert_array_equal(average_avg(X), average_ttw(X, FAST)[0])
