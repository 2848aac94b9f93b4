"""Synthetic warped-template data for demos and tests."""

from __future__ import annotations

import numpy as np

from .core import LabeledDataset


def bumps(s: np.ndarray, T: int) -> np.ndarray:
    """Smooth two-peak template evaluated at (real) positions ``s`` in 1..T."""
    u = (np.asarray(s, dtype=np.float64) - 1.0) / (T - 1)
    return (
        np.exp(-0.5 * ((u - 0.3) / 0.05) ** 2)
        - 0.7 * np.exp(-0.5 * ((u - 0.65) / 0.07) ** 2)
        + 0.4 * np.exp(-0.5 * ((u - 0.85) / 0.03) ** 2)
    )


def sine(s: np.ndarray, T: int, cycles: float = 2.0) -> np.ndarray:
    u = (np.asarray(s, dtype=np.float64) - 1.0) / (T - 1)
    return np.sin(2 * np.pi * cycles * u)


def square(s: np.ndarray, T: int, cycles: float = 2.0) -> np.ndarray:
    u = (np.asarray(s, dtype=np.float64) - 1.0) / (T - 1)
    return np.where(np.sin(2 * np.pi * cycles * u) >= 0, 1.0, -1.0)


def random_warps(rng: np.random.Generator, n: int, T: int, n_components: int = 2, amplitude: float | None = None) -> np.ndarray:
    """``n`` sine-series warps ``t + sum_k c_k sin(pi k (t-1)/(T-1))``.

    Coefficients are uniform in ``[-amplitude, amplitude]`` (default T/10).
    Rows are clamped to be non-decreasing.
    """
    amplitude = T / 10 if amplitude is None else amplitude
    t = np.arange(1, T + 1, dtype=np.float64)
    k = np.arange(1, n_components + 1)
    B = np.sin(np.pi * np.outer(t - 1, k) / (T - 1))
    c = rng.uniform(-amplitude, amplitude, size=(n, n_components))
    return np.maximum.accumulate(t + c @ B.T, axis=1)


def warped_set(
    rng: np.random.Generator,
    n: int = 10,
    T: int = 64,
    template=bumps,
    n_components: int = 2,
    amplitude: float | None = None,
    noise: float = 0.02,
) -> np.ndarray:
    """``n`` noisy copies of ``template`` read along random smooth warps."""
    s = random_warps(rng, n, T, n_components, amplitude)
    return template(s, T) + noise * rng.standard_normal((n, T))


def two_class(
    rng: np.random.Generator,
    n_per_class: int = 20,
    T: int = 64,
    noise: float = 0.05,
    amplitude: float | None = None,
) -> LabeledDataset:
    """Sine (label 0) versus square wave (label 1), each randomly warped."""
    a = warped_set(rng, n_per_class, T, sine, amplitude=amplitude, noise=noise)
    b = warped_set(rng, n_per_class, T, square, amplitude=amplitude, noise=noise)
    labels = np.repeat([0, 1], n_per_class)
    return LabeledDataset(np.vstack([a, b]), labels)
