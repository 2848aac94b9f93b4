"""Averaging a set of warped copies of one template.

The pointwise mean blurs features that arrive at different times. Trained
alignment moves them back together before averaging.
"""

import numpy as np

from ttw.dtw import dtw_sum
from ttw.pipeline import average_avg, average_ttw, tune_k
from ttw.synthetic import bumps, warped_set
from ttw.trainer import TrainConfig

rng = np.random.default_rng(3)
T = 64
X = warped_set(rng, n=10, T=T, amplitude=T / 10, noise=0.02)

# %% baseline and a fixed K
avg = average_avg(X)
centroid, result = average_ttw(X, TrainConfig(K=8, iterations=100))
print(f"loss {result.loss_trace[0]:.4f} -> {result.final_loss:.4f}")
print(f"DTW sum  avg {dtw_sum(avg, X):.4f}   ttw {dtw_sum(centroid, X):.4f}")

# %% choosing K by the DTW sum of each centroid
best, scores = tune_k(X, (1, 2, 4, 8, 16))
print("scores:", {k: round(v, 4) for k, v in scores.items()}, "best K:", best)

# %% optional plot
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(1, 2, figsize=(9, 3), sharey=True)
    ax[0].plot(X.T, color="0.7", lw=0.8)
    ax[0].plot(avg, "k", label="mean")
    ax[1].plot(result.synchronized.T, color="0.7", lw=0.8)
    ax[1].plot(centroid, "k", label="aligned mean")
    ax[1].plot(bumps(np.arange(1, T + 1), T), "r--", lw=0.8, label="template")
    for a in ax:
        a.legend()
    fig.savefig("averaging.png", dpi=100)
    print("wrote averaging.png")
