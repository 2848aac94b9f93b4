"""Joint alignment and averaging of time series with gradient-trained warps."""

from .core import (
    AlignmentResult,
    LabeledDataset,
    TimeSeries,
    ValidationError,
    WarpCoefficients,
    WarpingFunctions,
    validate_dataset,
    within_group_loss,
)
from .dtw import DtwResult, dtw_brute_force, dtw_distance, dtw_sum
from .pipeline import (
    AveragingReport,
    ClassificationReport,
    NearestCentroidModel,
    average_avg,
    average_ttw,
    averaging_experiment,
    classify,
    fit_nearest_centroid,
    stratified_halves,
    tune_k,
)
from .sinc import SincWindow, sinc, sinc_derivative, warp_signal, warp_signal_derivative, warp_signals
from .trainer import AdamState, TrainConfig, adam_update, backward, forward, train
from .warp import DstBasis, coefficients_to_warps, project_monotone, warp_jacobian

__version__ = "0.1.0"
