"""Reading a signal between its samples.

A truncated sinc window reads a series at any real position. Shifting
every read position by the same amount delays the whole signal, and the
result can be compared with the untruncated sum over all samples.
"""

import numpy as np

from ttw.sinc import sinc, warp_signal, warp_signal_full

# %% integer positions return the samples themselves
x = np.sin(np.linspace(0, 3 * np.pi, 40))
t = np.arange(1, 41, dtype=float)
print("max change at integer positions:", np.abs(warp_signal(x, t) - x).max())

# %% half-sample delay of a smooth signal
shifted = warp_signal(x, t + 0.5)
exact = np.sin(np.linspace(0, 3 * np.pi, 40) + 0.5 * 3 * np.pi / 39)
print("interior error vs the analytic shift:", np.abs(shifted - exact)[10:-10].max())

# %% how much the +-10 window leaves out
full = warp_signal_full(x, t + 0.5)
print("interior truncation error, smooth signal:", np.abs(shifted - full)[11:-11].max())
noise = np.random.default_rng(0).standard_normal(64)
t64 = np.arange(1, 65) + 0.5
print("interior truncation error, white noise:", np.abs(warp_signal(noise, t64) - warp_signal_full(noise, t64))[11:-11].max())

# %% the kernel itself
print("sinc at -1, -0.5, 0, 0.5, 1:", sinc(np.array([-1, -0.5, 0, 0.5, 1])))
