"""Sine-series warping functions and the monotonicity clamp."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ValidationError, WarpCoefficients, WarpingFunctions


@lru_cache(maxsize=64)
def _basis_matrix(T: int, K: int) -> np.ndarray:
    t = np.arange(1, T + 1, dtype=np.float64)
    k = np.arange(1, K + 1, dtype=np.float64)
    B = np.sin(np.pi * np.outer(t - 1.0, k) / (T - 1))
    # sin(pi k) is ~1e-16 in floating point; pin the endpoints exactly
    B[0, :] = 0.0
    B[-1, :] = 0.0
    B.setflags(write=False)
    return B


@dataclass(frozen=True)
class DstBasis:
    """Cached ``B[t, k] = sin(pi k (t - 1) / (T - 1))`` for t = 1..T, k = 1..K."""

    T: int
    K: int

    def __post_init__(self):
        if self.T < 2:
            raise ValidationError(f"T must be >= 2, got {self.T}")
        if self.K < 1:
            raise ValidationError(f"K must be >= 1, got {self.K}")

    @property
    def matrix(self) -> np.ndarray:
        return _basis_matrix(int(self.T), int(self.K))


def _coef_array(A) -> np.ndarray:
    return A.a if isinstance(A, WarpCoefficients) else np.atleast_2d(np.asarray(A, dtype=np.float64))


def coefficients_to_warps(A, basis: DstBasis) -> np.ndarray:
    """``tau[n, t] = t + sum_k A[n, k] * B[t, k]`` (before projection)."""
    a = _coef_array(A)
    if a.shape[1] != basis.K:
        raise ValidationError(f"coefficients have K={a.shape[1]}, basis has K={basis.K}")
    t = np.arange(1, basis.T + 1, dtype=np.float64)
    return t + a @ basis.matrix.T


def project_monotone(tau) -> np.ndarray:
    """Left-to-right clamp: whenever ``tau[t] < tau[t-1]`` set ``tau[t] = tau[t-1]``.

    The sequential clamp is a running maximum along each row.
    """
    tau = tau.tau if isinstance(tau, WarpingFunctions) else np.asarray(tau, dtype=np.float64)
    return np.maximum.accumulate(tau, axis=-1)


def boundary_violations(tau, atol: float = 1e-9) -> int:
    """Rows whose last position is no longer T (the clamp carried a larger value)."""
    tau = np.atleast_2d(np.asarray(tau, dtype=np.float64))
    T = tau.shape[1]
    return int(np.count_nonzero(np.abs(tau[:, -1] - T) > atol))


def warp_jacobian(basis: DstBasis) -> np.ndarray:
    """d tau[n, t] / d A[n, k]; the same T x K matrix for every signal."""
    return basis.matrix
