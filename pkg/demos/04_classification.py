"""Nearest-centroid classification of sines and squares."""

import numpy as np

from ttw.pipeline import classify, fit_nearest_centroid, stratified_halves
from ttw.synthetic import two_class

rng = np.random.default_rng(4)
train, test = two_class(rng, 20, 64, noise=0.05), two_class(rng, 20, 64, noise=0.05)

# half the training set fits centroids, the other half picks K per class
fit, val = stratified_halves(train, seed=0)
model = fit_nearest_centroid(fit, val)
report = classify(model, test)
print("K per class:", model.per_class_k)
print("accuracy:", report.accuracy)
print("confusion:\n", report.confusion)
