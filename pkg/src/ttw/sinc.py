"""Truncated-sinc resampling of signals at real-valued positions.

A signal ``x`` (samples at 1..T) is read at position ``tau`` by

    x~ = sum_{m = floor(tau) - W}^{floor(tau) + W} x[m] * sinc(tau - m)

with samples outside 1..T treated as zero. The derivative with respect to
``tau`` uses the same window with ``sinc'`` in place of ``sinc``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# below this |t| the closed-form derivative loses digits to cancellation
_SERIES_CUTOFF = 1e-3


@dataclass(frozen=True)
class SincWindow:
    half_width: int = 10

    def __post_init__(self):
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise ValueError(f"half_width must be a positive integer, got {self.half_width}")

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)


def _half_width(window) -> int:
    if window is None:
        return SincWindow().half_width
    if isinstance(window, SincWindow):
        return window.half_width
    return SincWindow(int(window)).half_width


def sinc(t):
    """Normalized sinc, exactly 1 at 0 and exactly 0 at the other integers."""
    t = np.asarray(t, dtype=np.float64)
    out = np.sinc(t)
    integer = t == np.round(t)
    out = np.where(integer, (t == 0).astype(np.float64), out)
    return out if out.ndim else float(out)


def sinc_derivative(t):
    """d/dt sinc(t) = (pi t cos(pi t) - sin(pi t)) / (pi t^2); 0 at t = 0."""
    t = np.asarray(t, dtype=np.float64)
    small = np.abs(t) < _SERIES_CUTOFF
    ts = np.where(small, 1.0, t)
    pt = np.pi * ts
    closed = (pt * np.cos(pt) - np.sin(pt)) / (np.pi * ts * ts)
    # integers: sin(pi k) is exactly zero, cos(pi k) = (-1)^k
    integer = (t == np.round(t)) & ~small
    closed = np.where(integer, np.cos(pt) / ts, closed)
    p2 = np.pi * np.pi
    series = t * (-p2 / 3.0 + t * t * (p2 * p2 / 30.0))
    out = np.where(small, series, closed)
    return out if out.ndim else float(out)


def _gather(X: np.ndarray, tau: np.ndarray, W: int):
    """Window samples and offsets for every (n, t).

    Returns ``(samples, delta)`` of shape ``(N, T, 2W+1)`` where
    ``delta = tau - m`` and ``samples`` is zero for ``m`` outside 1..T.
    """
    N, T = X.shape
    base = np.floor(tau).astype(np.int64)
    m = base[:, :, None] + np.arange(-W, W + 1)
    inside = (m >= 1) & (m <= T)
    idx = np.clip(m - 1, 0, T - 1)
    samples = np.take_along_axis(X, idx.reshape(N, -1), axis=1).reshape(m.shape)
    samples = np.where(inside, samples, 0.0)
    delta = tau[:, :, None] - m
    return samples, delta


def _warp_numpy(X, tau, W, derivative):
    samples, delta = _gather(X, tau, W)
    warped = np.einsum("ntw,ntw->nt", samples, sinc(delta))
    deriv = np.einsum("ntw,ntw->nt", samples, sinc_derivative(delta)) if derivative else None
    return warped, deriv


def _warp_loops(X, tau, W, derivative):
    """Same sums as :func:`_warp_numpy` written as plain loops (compiled by numba).

    With ``f = tau - floor(tau)`` and ``j = m - floor(tau)``,
    ``sin(pi (tau - m)) = (-1)^j sin(pi f)``, so each output sample needs one
    sine and one cosine.
    """
    N, T = X.shape
    warped = np.zeros((N, T))
    deriv = np.zeros((N, T))
    pi = np.pi
    p2 = pi * pi
    for n in range(N):
        for t in range(T):
            p = tau[n, t]
            fl = np.floor(p)
            base = int(fl)
            frac = p - fl
            s0 = np.sin(pi * frac)
            c0 = np.cos(pi * frac)
            acc = 0.0
            dacc = 0.0
            for m in range(max(base - W, 1), min(base + W, T) + 1):
                x = X[n, m - 1]
                u = p - m
                sign = 1.0 if (m - base) % 2 == 0 else -1.0
                if frac == 0.0:
                    if m == base:
                        acc += x
                    elif derivative:
                        dacc += x * sign / u
                    continue
                pu = pi * u
                su = sign * s0
                acc += x * (su / pu)
                if derivative:
                    if abs(u) < _SERIES_CUTOFF:
                        dacc += x * (u * (-p2 / 3.0 + u * u * (p2 * p2 / 30.0)))
                    else:
                        dacc += x * ((pu * sign * c0 - su) / (pi * u * u))
            warped[n, t] = acc
            deriv[n, t] = dacc
    return warped, deriv


try:
    import numba as _nb

    _warp_fast = _nb.njit(cache=True, nogil=True)(_warp_loops)
except ImportError:  # pragma: no cover
    _warp_fast = None


def _as_rows(x, tau):
    X = np.asarray(x, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
        tau = tau[None, :]
    if X.shape != tau.shape:
        raise ValueError(f"signal shape {X.shape} does not match warp shape {tau.shape}")
    return X, tau, single


def warp_signals(X, tau, window=None, derivative: bool = False, backend: str = "auto"):
    """Resample each row of ``X`` at the positions in the matching row of ``tau``.

    Works on a single series (1-D) or an N x T batch. With
    ``derivative=True`` returns ``(warped, d_warped / d_tau)``. ``backend``
    is ``"auto"`` (compiled loops when numba is available), ``"numba"`` or
    ``"numpy"``.
    """
    W = _half_width(window)
    X, tau, single = _as_rows(X, tau)
    if backend == "numpy" or (backend == "auto" and _warp_fast is None):
        warped, deriv = _warp_numpy(X, tau, W, derivative)
    elif backend in ("auto", "numba"):
        if _warp_fast is None:
            raise RuntimeError("numba is not installed")
        warped, deriv = _warp_fast(np.ascontiguousarray(X), np.ascontiguousarray(tau), W, derivative)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if not derivative:
        return warped[0] if single else warped
    if single:
        return warped[0], deriv[0]
    return warped, deriv


def warp_signal(x, tau_row, window=None) -> np.ndarray:
    """Truncated-sinc reading of ``x`` at positions ``tau_row``."""
    return warp_signals(x, tau_row, window)


def warp_signal_derivative(x, tau_row, window=None) -> np.ndarray:
    """Elementwise derivative of :func:`warp_signal` with respect to ``tau_row``."""
    return warp_signals(x, tau_row, window, derivative=True)[1]


def warp_signal_full(x, tau_row) -> np.ndarray:
    """Untruncated reading, summing over every sample m = 1..T. O(T^2)."""
    x = np.asarray(x, dtype=np.float64)
    tau_row = np.asarray(tau_row, dtype=np.float64)
    m = np.arange(1, x.size + 1)
    return sinc(tau_row[:, None] - m[None, :]) @ x
