"""Smooth warping functions from a few sine coefficients."""

import numpy as np

from ttw.warp import DstBasis, boundary_violations, coefficients_to_warps, project_monotone

T, K = 50, 4
basis = DstBasis(T, K)
rng = np.random.default_rng(1)

# %% small coefficients give monotone warps pinned at both ends
A = rng.normal(0, 2.0, (3, K))
tau = coefficients_to_warps(A, basis)
print("first/last positions:", tau[:, 0], tau[:, -1])
print("already monotone:", np.all(np.diff(tau, axis=1) >= 0, axis=1))

# %% large ones fold back, and the clamp flattens the folds
A = rng.uniform(-T / 4, T / 4, (5, K))
raw = coefficients_to_warps(A, basis)
tau = project_monotone(raw)
print("rows needing the clamp:", int(np.sum(np.any(np.diff(raw, axis=1) < 0, axis=1))))
print("rows whose last position moved above T:", boundary_violations(tau))
