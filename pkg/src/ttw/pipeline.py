"""Averaging, K selection and nearest-centroid classification workflows."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import AlignmentResult, LabeledDataset, ValidationError, as_matrix
from .dtw import dtw_distance, dtw_sum
from .trainer import TrainConfig, train

logger = logging.getLogger(__name__)

DEFAULT_K_GRID = (1, 2, 4, 8, 16)


def _map(fn, items, n_jobs: int = 1) -> list:
    items = list(items)
    if n_jobs is None or n_jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


def average_avg(X) -> np.ndarray:
    """Sample-by-sample mean of the unaligned series."""
    X = LabeledDataset(as_matrix(X)).series if not isinstance(X, LabeledDataset) else X.series
    return X.mean(axis=0)


def average_ttw(X, cfg: TrainConfig | None = None) -> tuple[np.ndarray, AlignmentResult]:
    """Centroid of the jointly aligned series plus the full training result."""
    result = train(X, cfg or TrainConfig())
    return result.centroid, result


def tune_k(
    X,
    grid: Sequence[int] = DEFAULT_K_GRID,
    cfg_base: TrainConfig | None = None,
    n_jobs: int = 1,
) -> tuple[int, dict[int, float]]:
    """Pick the K whose centroid has the smallest DTW sum to ``X``.

    Returns ``(best_k, {K: dtw_sum})``; ties go to the smaller K.
    """
    grid = sorted(set(int(k) for k in grid))
    if not grid:
        raise ValidationError("K grid is empty")
    cfg_base = cfg_base or TrainConfig()
    X = X if isinstance(X, LabeledDataset) else LabeledDataset(as_matrix(X))

    def score(k):
        centroid, _ = average_ttw(X, cfg_base.replace(K=k))
        return dtw_sum(centroid, X)

    scores = dict(zip(grid, _map(score, grid, n_jobs)))
    best = min(grid, key=lambda k: (scores[k], k))
    return best, scores


@dataclass
class NearestCentroidModel:
    labels: list[int]
    centroids: list[np.ndarray]
    per_class_k: dict[int, int]
    tuning: str  # "validation" or "dtw_sum"
    trail: list[str] = field(default_factory=list)


@dataclass
class ClassificationReport:
    labels: list[int]
    centroids: list[np.ndarray]
    per_class_k: dict[int, int]
    accuracy: float
    confusion: np.ndarray  # rows: true label, columns: predicted label, ordered as ``labels``
    predictions: np.ndarray


def stratified_halves(ds: LabeledDataset, seed: int = 0) -> tuple[LabeledDataset, LabeledDataset]:
    """Seeded per-class split into a fitting half and a validation half.

    Each class keeps at least one member in the fitting half.
    """
    rng = np.random.default_rng(seed)
    first, second = [], []
    for c in ds.classes():
        idx = np.flatnonzero(ds.labels == c)
        idx = idx[rng.permutation(idx.size)]
        cut = (idx.size + 1) // 2
        first.extend(idx[:cut])
        second.extend(idx[cut:])
    return ds.subset(sorted(first)), ds.subset(sorted(second)) if second else None


def _assign(dist: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, i.e. the lowest class index on ties
    return np.argmin(dist, axis=1)


def fit_nearest_centroid(
    train_ds: LabeledDataset,
    val: LabeledDataset | None = None,
    grid: Sequence[int] = DEFAULT_K_GRID,
    cfg_base: TrainConfig | None = None,
    n_jobs: int = 1,
) -> NearestCentroidModel:
    """One centroid per class, with K chosen per class.

    Every class starts from its DTW-sum best K. With a non-empty validation
    set, each class's K is then revisited in turn (coordinate ascent, other
    classes fixed) to maximize validation accuracy; ties keep the current K,
    then prefer the smaller one.
    """
    cfg_base = cfg_base or TrainConfig()
    if train_ds.labels is None:
        raise ValidationError("training data needs labels")
    labels = [int(c) for c in train_ds.classes()]
    if val is not None and val.labels is not None:
        missing = sorted(set(int(c) for c in val.classes()) - set(labels))
        if missing:
            raise ValidationError(f"class {missing[0]} has no training members", index=missing[0])
    grid = sorted(set(int(k) for k in grid))

    jobs = [(c, k) for c in labels for k in grid]

    def fit(job):
        c, k = job
        members = train_ds.of_class(c)
        centroid, _ = average_ttw(members, cfg_base.replace(K=k))
        return centroid, dtw_sum(centroid, members)

    fitted = dict(zip(jobs, _map(fit, jobs, n_jobs)))
    chosen = {c: min(grid, key=lambda k: (fitted[c, k][1], k)) for c in labels}
    trail = [f"class {c}: dtw_sum K={chosen[c]}" for c in labels]
    tuning = "dtw_sum"

    if val is not None and len(val) > 0 and len(grid) > 1:
        tuning = "validation"
        # dist[v, class index, grid index]
        dist = np.empty((len(val), len(labels), len(grid)))
        for ci, c in enumerate(labels):
            for gi, k in enumerate(grid):
                cen = fitted[c, k][0]
                dist[:, ci, gi] = [dtw_distance(x, cen, return_path=False).distance for x in val.series]
        truth = np.array([labels.index(int(y)) if int(y) in labels else -1 for y in val.labels])
        gi_of = {c: grid.index(chosen[c]) for c in labels}

        def accuracy(sel):
            d = dist[:, np.arange(len(labels)), [sel[c] for c in labels]]
            return float(np.mean(_assign(d) == truth))

        for _ in range(3):
            changed = False
            for c in labels:
                current = accuracy(gi_of)
                best_gi, best_acc = gi_of[c], current
                for gi in range(len(grid)):
                    acc = accuracy({**gi_of, c: gi})
                    if acc > best_acc:
                        best_gi, best_acc = gi, acc
                if best_gi != gi_of[c]:
                    gi_of[c] = best_gi
                    changed = True
            if not changed:
                break
        chosen = {c: grid[gi_of[c]] for c in labels}
        trail.append(f"validation accuracy {accuracy(gi_of):.4f} with K={chosen}")
    else:
        trail.append("no validation data: K chosen by dtw_sum")

    return NearestCentroidModel(
        labels=labels,
        centroids=[fitted[c, chosen[c]][0] for c in labels],
        per_class_k=chosen,
        tuning=tuning,
        trail=trail,
    )


def classify(centroids, test: LabeledDataset) -> ClassificationReport:
    """Label each test series by its DTW-nearest centroid.

    ``centroids`` is a :class:`NearestCentroidModel`, a ``{label: series}``
    mapping or a sequence (labels 0..C-1). Ties go to the lowest class index.
    """
    per_class_k: dict[int, int] = {}
    if isinstance(centroids, NearestCentroidModel):
        labels, cents, per_class_k = list(centroids.labels), list(centroids.centroids), dict(centroids.per_class_k)
    elif isinstance(centroids, dict):
        labels = sorted(int(k) for k in centroids)
        cents = [np.asarray(centroids[k], dtype=np.float64) for k in sorted(centroids)]
    else:
        cents = [np.asarray(c, dtype=np.float64) for c in centroids]
        labels = list(range(len(cents)))
    if not cents:
        raise ValidationError("need at least one centroid")
    dist = np.array([[dtw_distance(x, c, return_path=False).distance for c in cents] for x in test.series])
    pred = np.asarray(labels)[_assign(dist)]
    if test.labels is None:
        return ClassificationReport(labels, cents, per_class_k, float("nan"), np.zeros((0, 0), int), pred)
    all_labels = sorted(set(labels) | set(int(y) for y in test.labels))
    pos = {c: i for i, c in enumerate(all_labels)}
    confusion = np.zeros((len(all_labels), len(all_labels)), dtype=np.int64)
    for y, p in zip(test.labels, pred):
        confusion[pos[int(y)], pos[int(p)]] += 1
    accuracy = float(np.trace(confusion) / confusion.sum())
    return ClassificationReport(all_labels, cents, per_class_k, accuracy, confusion, pred)


@dataclass
class AveragingReport:
    method: str
    label: int | None
    per_set_dtw_sum: list[float]
    mean_dtw_sum: float
    config_used: dict
    chosen_k: list[int] = field(default_factory=list)
    with_replacement: bool = False


def _centroid_for(method: str, X: LabeledDataset, cfg: TrainConfig, k_grid):
    if method == "avg":
        return average_avg(X), None
    if method != "ttw":
        raise ValidationError(f"unknown averaging method {method!r}")
    if k_grid:
        k, _ = tune_k(X, k_grid, cfg)
        cfg = cfg.replace(K=k)
    centroid, _ = average_ttw(X, cfg)
    return centroid, cfg.K


def averaging_experiment(
    dataset: LabeledDataset,
    sets_per_class: int = 10,
    set_size: int = 10,
    methods: Sequence[str] = ("ttw", "avg"),
    cfg: TrainConfig | None = None,
    seed: int = 0,
    replace: bool = False,
    k_grid: Sequence[int] | None = None,
    n_jobs: int = 1,
) -> list[AveragingReport]:
    """Score averaging methods on random subsets of each class.

    For each class draw ``sets_per_class`` sets of ``set_size`` series, build
    a centroid with each method and record its DTW sum to the set. With
    ``k_grid`` the TTW K is tuned per set by DTW sum. Returns one report per
    (class, method), ordered by class then method.
    """
    cfg = cfg or TrainConfig()
    rng = np.random.default_rng(seed)
    labels = dataset.classes() if dataset.labels is not None else [None]
    sets = []
    for c in labels:
        pool = np.arange(len(dataset)) if c is None else np.flatnonzero(dataset.labels == c)
        if pool.size < set_size and not replace:
            raise ValidationError(
                f"class {c} has {pool.size} series, fewer than set_size={set_size}; pass replace=True to sample with replacement",
                index=c,
            )
        for _ in range(sets_per_class):
            sets.append((c, rng.choice(pool, size=set_size, replace=replace)))

    def run(item):
        c, idx = item
        members = LabeledDataset(dataset.series[idx])
        out = {}
        for m in methods:
            centroid, k = _centroid_for(m, members, cfg, k_grid)
            out[m] = (dtw_sum(centroid, members), k)
        return c, out

    results = _map(run, sets, n_jobs)
    reports = []
    for c in labels:
        rows = [out for lab, out in results if lab == c]
        for m in methods:
            sums = [float(r[m][0]) for r in rows]
            ks = [r[m][1] for r in rows if r[m][1] is not None]
            reports.append(
                AveragingReport(
                    method=m,
                    label=None if c is None else int(c),
                    per_set_dtw_sum=sums,
                    mean_dtw_sum=float(np.mean(sums)),
                    config_used=cfg.to_dict() | ({"k_grid": list(k_grid)} if k_grid and m == "ttw" else {}),
                    chosen_k=ks,
                    with_replacement=replace,
                )
            )
    return reports
