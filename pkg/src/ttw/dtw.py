"""Classic DTW distance used to score centroids.

Local cost is the squared difference, steps are (1,0), (0,1), (1,1), there
is no band and no length normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LabeledDataset, ValidationError, as_matrix


def _accumulate_py(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n, m = x.size, y.size
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        xi = x[i - 1]
        prev = D[i - 1]
        row = D[i]
        for j in range(1, m + 1):
            d = xi - y[j - 1]
            row[j] = d * d + min(prev[j - 1], prev[j], row[j - 1])
    return D


try:
    import numba as _nb

    _accumulate = _nb.njit(cache=True)(_accumulate_py)
except ImportError:  # pragma: no cover
    _accumulate = _accumulate_py


@dataclass(frozen=True)
class DtwResult:
    distance: float
    path: list[tuple[int, int]]  # 1-based (i, j) pairs from (1, 1) to (len(x), len(y))


def _series(s, name: str) -> np.ndarray:
    a = np.asarray(s, dtype=np.float64).ravel()
    if a.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite values")
    return a


def _traceback(D: np.ndarray) -> list[tuple[int, int]]:
    i, j = D.shape[0] - 1, D.shape[1] - 1
    path = [(i, j)]
    while (i, j) != (1, 1):
        # ties prefer the diagonal, then the vertical (i - 1) step
        steps = ((i - 1, j - 1), (i - 1, j), (i, j - 1))
        i, j = min(steps, key=lambda p: D[p])
        path.append((i, j))
    path.reverse()
    return path


def dtw_distance(x, y, return_path: bool = True) -> DtwResult:
    """DTW between ``x`` and ``y`` with one optimal path."""
    x = _series(x, "x")
    y = _series(y, "y")
    D = _accumulate(x, y)
    path = _traceback(D) if return_path else []
    return DtwResult(float(D[-1, -1]), path)


def dtw_sum(candidate, X) -> float:
    """Sum of DTW distances from every member of ``X`` to ``candidate``.

    ``X`` may be a dataset, an N x T array or a list of series of any length.
    """
    rows = as_matrix(X) if isinstance(X, (LabeledDataset, np.ndarray)) else X
    return float(sum(dtw_distance(row, candidate, return_path=False).distance for row in rows))


def dtw_brute_force(x, y, max_len: int = 10) -> float:
    """Minimum path cost by enumerating every monotone warping path.

    Exponential in the lengths; only meant as a test oracle.
    """
    x = _series(x, "x")
    y = _series(y, "y")
    if x.size > max_len or y.size > max_len:
        raise ValidationError(f"brute force is limited to length {max_len}, got {x.size} and {y.size}")
    n, m = x.size, y.size
    cost = (x[:, None] - y[None, :]) ** 2
    best = np.inf
    stack = [(0, 0, cost[0, 0])]
    while stack:
        i, j, c = stack.pop()
        if i == n - 1 and j == m - 1:
            best = min(best, c)
            continue
        if i + 1 < n:
            stack.append((i + 1, j, c + cost[i + 1, j]))
        if j + 1 < m:
            stack.append((i, j + 1, c + cost[i, j + 1]))
        if i + 1 < n and j + 1 < m:
            stack.append((i + 1, j + 1, c + cost[i + 1, j + 1]))
    return float(best)
