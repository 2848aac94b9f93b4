"""Gradient-trained joint alignment of N signals.

Each iteration runs

    forward:  A -> tau (sine series) -> clamp -> warped signals -> loss
    backward: dloss/dA = dloss/dtau @ B
    update:   one Adam step on A

starting from A = 0 (identity warps).
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np

from .core import AlignmentResult, LabeledDataset, ValidationError, WarpCoefficients, WarpingFunctions, as_matrix, group_mean
from .sinc import warp_signals
from .warp import DstBasis, boundary_violations, coefficients_to_warps, project_monotone

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    K: int = 8
    iterations: int = 100
    step_size: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    window_half_width: int = 10
    seed: int = 0  # reserved; the default path is deterministic
    exact_gradient: bool = False
    # relative loss-change threshold for stopping early; None runs all iterations
    tol: float | None = None

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValidationError(f"K must be a positive integer, got {self.K}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValidationError(f"iterations must be a positive integer, got {self.iterations}")
        if not self.step_size > 0:
            raise ValidationError(f"step_size must be positive, got {self.step_size}")
        for name in ("adam_beta1", "adam_beta2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValidationError(f"{name} must lie in (0, 1), got {v}")
        if not self.adam_epsilon > 0:
            raise ValidationError(f"adam_epsilon must be positive, got {self.adam_epsilon}")
        if int(self.window_half_width) != self.window_half_width or self.window_half_width < 1:
            raise ValidationError(f"window_half_width must be a positive integer, got {self.window_half_width}")
        if self.tol is not None and not self.tol >= 0:
            raise ValidationError(f"tol must be non-negative, got {self.tol}")

    def replace(self, **changes) -> "TrainConfig":
        return TrainConfig(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class AdamState:
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0

    @classmethod
    def zeros(cls, shape) -> "AdamState":
        return cls(np.zeros(shape), np.zeros(shape), 0)


class ForwardPass(NamedTuple):
    synchronized: np.ndarray
    centroid: np.ndarray
    loss: float
    tau: np.ndarray
    dwarp_dtau: np.ndarray
    boundary_violations: int


def forward(X, A, cfg: TrainConfig) -> ForwardPass:
    """Warp every signal with the current coefficients and score the group."""
    X = as_matrix(X)
    a = A.a if isinstance(A, WarpCoefficients) else np.asarray(A, dtype=np.float64)
    N, T = X.shape
    if a.shape != (N, cfg.K):
        raise ValidationError(f"coefficients have shape {a.shape}, expected {(N, cfg.K)}")
    basis = DstBasis(T, cfg.K)
    tau = project_monotone(coefficients_to_warps(a, basis))
    warped, deriv = warp_signals(X, tau, cfg.window_half_width, derivative=True)
    centroid = group_mean(warped)
    with np.errstate(over="ignore", invalid="ignore"):
        loss = float(np.mean((warped - centroid) ** 2))
    return ForwardPass(warped, centroid, loss, tau, deriv, boundary_violations(tau))


def backward(fp: ForwardPass, cfg: TrainConfig) -> np.ndarray:
    """N x K gradient of the loss with respect to the coefficients.

    The clamp is treated as identity (straight-through). By default the
    centroid is held fixed when differentiating; ``cfg.exact_gradient`` adds
    the centroid's own dependence on tau. That extra term is the row-mean of
    the residuals, which is zero, so both modes agree up to rounding.
    """
    N, T = fp.synchronized.shape
    resid = fp.synchronized - fp.centroid
    if cfg.exact_gradient:
        resid = resid - resid.mean(axis=0)
    dloss_dtau = (2.0 / (N * T)) * resid * fp.dwarp_dtau
    return dloss_dtau @ DstBasis(T, cfg.K).matrix


def adam_update(A, gradient, state: AdamState, cfg: TrainConfig) -> tuple[np.ndarray, AdamState]:
    """One bias-corrected Adam step. Returns new coefficients and a new state."""
    a = A.a if isinstance(A, WarpCoefficients) else np.asarray(A, dtype=np.float64)
    g = np.asarray(gradient, dtype=np.float64)
    if g.shape != a.shape or state.first_moment.shape != a.shape:
        raise ValidationError(f"shape mismatch: A {a.shape}, gradient {g.shape}, state {state.first_moment.shape}")
    t = state.step_count + 1
    m = cfg.adam_beta1 * state.first_moment + (1.0 - cfg.adam_beta1) * g
    v = cfg.adam_beta2 * state.second_moment + (1.0 - cfg.adam_beta2) * (g * g)
    m_hat = m / (1.0 - cfg.adam_beta1**t)
    v_hat = v / (1.0 - cfg.adam_beta2**t)
    a_new = a - cfg.step_size * m_hat / (np.sqrt(v_hat) + cfg.adam_epsilon)
    return a_new, AdamState(m, v, t)


def train(
    X,
    cfg: TrainConfig | None = None,
    callback: Callable[[int, float], None] | None = None,
) -> AlignmentResult:
    """Align the rows of ``X`` and return the centroid with diagnostics.

    ``loss_trace[i]`` is the loss seen by iteration ``i`` before its update.
    The returned signals, warps and centroid come from one extra forward
    pass on the final coefficients; its loss is ``final_loss``.
    """
    cfg = cfg or TrainConfig()
    if isinstance(X, LabeledDataset):
        X = X.series
    else:
        X = LabeledDataset(as_matrix(X)).series
    N, T = X.shape
    a = np.zeros((N, cfg.K))
    state = AdamState.zeros(a.shape)
    trace: list[float] = []
    violations = 0
    for i in range(cfg.iterations):
        fp = forward(X, a, cfg)
        if not np.isfinite(fp.loss):
            raise FloatingPointError(f"non-finite loss at iteration {i + 1}")
        trace.append(fp.loss)
        violations += fp.boundary_violations
        if callback is not None:
            callback(i + 1, fp.loss)
        a, state = adam_update(a, backward(fp, cfg), state, cfg)
        if cfg.tol is not None and i > 0:
            prev = trace[-2]
            if abs(prev - fp.loss) <= cfg.tol * max(abs(prev), np.finfo(float).tiny):
                logger.debug("stopping at iteration %d, relative change below %g", i + 1, cfg.tol)
                break
    fp = forward(X, a, cfg)
    if not np.isfinite(fp.loss):
        raise FloatingPointError("non-finite loss after the final update")
    violations += fp.boundary_violations
    if violations:
        logger.info("clamp moved the end point of %d warp rows", violations)
    return AlignmentResult(
        synchronized=fp.synchronized,
        centroid=fp.centroid,
        loss_trace=np.asarray(trace),
        warps=WarpingFunctions(fp.tau),
        coefficients=WarpCoefficients(a),
        final_loss=fp.loss,
        boundary_violations=violations,
        config=cfg.to_dict(),
    )
