"""Domain types and the within-group objective.

All series are stored as float64 numpy arrays. Formulas in docstrings use
1-based positions (``x[1] .. x[T]``); storage is the usual 0-based layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ValidationError(ValueError):
    """Input violates a data invariant.

    ``index`` holds the 1-based location of the first violation (an int for
    a series, an ``(n, t)`` tuple for an element), or ``None``.
    """

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _check_finite(a: np.ndarray, what: str) -> None:
    bad = np.argwhere(~np.isfinite(a))
    if bad.size:
        loc = tuple(int(i) + 1 for i in bad[0])
        if len(loc) == 1:
            loc = loc[0]
        raise ValidationError(f"{what}: non-finite value at {loc}", index=loc)


@dataclass(frozen=True)
class TimeSeries:
    """A single real-valued sequence of length T >= 2."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValidationError(f"time series must be 1-D, got shape {v.shape}")
        if v.size < 2:
            raise ValidationError(f"time series needs length >= 2, got {v.size}")
        _check_finite(v, "time series")
        object.__setattr__(self, "values", _frozen(v))

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def validate_dataset(series: Sequence, labels: Sequence | None = None) -> None:
    """Check equal lengths, finiteness and label count.

    Raises :class:`ValidationError` naming the first offending series
    (1-based) or element ``(n, t)``. Returns ``None`` when the input is fine.
    """
    if isinstance(series, LabeledDataset):
        series, labels = series.series, series.labels
    rows = [np.asarray(s, dtype=np.float64) for s in series]
    if not rows:
        raise ValidationError("dataset is empty (N must be >= 1)")
    length = rows[0].size
    for n, row in enumerate(rows, start=1):
        if row.ndim != 1:
            raise ValidationError(f"series {n} is not 1-D", index=n)
        if row.size != length:
            raise ValidationError(
                f"length mismatch: series {n} has length {row.size}, expected {length}",
                index=n,
            )
    if length < 2:
        raise ValidationError(f"series length must be >= 2, got {length}")
    for n, row in enumerate(rows, start=1):
        bad = np.flatnonzero(~np.isfinite(row))
        if bad.size:
            loc = (n, int(bad[0]) + 1)
            raise ValidationError(f"non-finite value at (n, t) = {loc}", index=loc)
    if labels is not None and len(labels) != len(rows):
        raise ValidationError(f"got {len(labels)} labels for {len(rows)} series")


@dataclass(frozen=True)
class LabeledDataset:
    """N equal-length series (an N x T array) with optional integer labels."""

    series: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        validate_dataset(self.series, self.labels)
        object.__setattr__(self, "series", _frozen(np.vstack([np.asarray(s, dtype=np.float64) for s in self.series])))
        if self.labels is not None:
            lab = np.array(self.labels, dtype=np.int64, copy=True)
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n_series(self) -> int:
        return self.series.shape[0]

    @property
    def length(self) -> int:
        return self.series.shape[1]

    def __len__(self) -> int:
        return self.n_series

    def classes(self) -> np.ndarray:
        if self.labels is None:
            raise ValidationError("dataset has no labels")
        return np.unique(self.labels)

    def subset(self, idx) -> "LabeledDataset":
        idx = np.asarray(idx, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return LabeledDataset(self.series[idx], labels)

    def of_class(self, label: int) -> "LabeledDataset":
        return self.subset(np.flatnonzero(self.labels == label))


def as_matrix(X) -> np.ndarray:
    """Return the N x T float64 view of a dataset or array-like."""
    if isinstance(X, LabeledDataset):
        return X.series
    a = np.asarray(X, dtype=np.float64)
    if a.ndim == 1:
        a = a[None, :]
    return a


@dataclass(frozen=True)
class WarpCoefficients:
    """N x K matrix of sine-series coefficients, one row per signal."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] < 1:
            raise ValidationError(f"coefficients must be N x K with K >= 1, got shape {a.shape}")
        _check_finite(a, "coefficients")
        object.__setattr__(self, "a", _frozen(a))

    @property
    def k_max(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True)
class WarpingFunctions:
    """N x T matrix of real read positions tau[n][t] (1-based positions)."""

    tau: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=np.float64)
        if tau.ndim != 2:
            raise ValidationError(f"warps must be N x T, got shape {tau.shape}")
        _check_finite(tau, "warps")
        object.__setattr__(self, "tau", _frozen(tau))

    def boundary_ok(self, atol: float = 1e-9) -> np.ndarray:
        """Per-row flag: tau[1] == 1 and tau[T] == T within ``atol``."""
        T = self.tau.shape[1]
        return (np.abs(self.tau[:, 0] - 1.0) <= atol) & (np.abs(self.tau[:, -1] - T) <= atol)

    def is_monotone(self) -> np.ndarray:
        return np.all(np.diff(self.tau, axis=1) >= 0, axis=1)


@dataclass(frozen=True)
class AlignmentResult:
    synchronized: np.ndarray
    centroid: np.ndarray
    loss_trace: np.ndarray
    warps: WarpingFunctions
    coefficients: WarpCoefficients
    final_loss: float = float("nan")
    boundary_violations: int = 0
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        trace = np.asarray(self.loss_trace, dtype=np.float64)
        if trace.size == 0:
            raise ValidationError("loss trace is empty")
        if not np.all(np.isfinite(trace)) or np.any(trace < 0):
            raise ValidationError("loss trace must be finite and non-negative")
        object.__setattr__(self, "loss_trace", _frozen(trace))
        object.__setattr__(self, "synchronized", _frozen(self.synchronized))
        object.__setattr__(self, "centroid", _frozen(self.centroid))


def within_group_loss(synchronized) -> tuple[float, np.ndarray]:
    """Within-group mean squared error of aligned signals and their mean.

    ``y[t] = mean_n x[n, t]`` and ``loss = sum_{n,t} (x[n, t] - y[t])**2 / (N*T)``.
    """
    Xs = np.asarray(synchronized, dtype=np.float64)
    if Xs.ndim != 2 or Xs.shape[1] < 2:
        raise ValidationError(f"expected an N x T matrix with T >= 2, got shape {Xs.shape}")
    _check_finite(Xs, "synchronized signals")
    y = group_mean(Xs)
    loss = float(np.mean((Xs - y) ** 2))
    return loss, y


def group_mean(Xs: np.ndarray) -> np.ndarray:
    """Column mean taken as offsets from the first row.

    Identical rows give zero offsets, so their mean is reproduced exactly.
    """
    ref = Xs[0]
    return ref + (Xs - ref).mean(axis=0)
