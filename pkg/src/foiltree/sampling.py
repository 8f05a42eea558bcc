"""Local sample generation and proximity weighting around a questioned point.

The explanation tree is trained on points drawn near the instance being
explained. Three generators are provided: resampling existing training rows,
feature-wise Gaussian perturbation from dataset statistics, and independent
per-feature bootstrap of marginals. Proximity weights then concentrate the
tree's attention on the neighborhood of the questioned point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Scaler
from .errors import InsufficientData

SAMPLING_METHODS = ("sampled-existing", "gaussian", "marginal")

#: Weights are clipped here so no point fully vanishes from the training
#: objective, which keeps total weight positive for weight-fraction rules.
WEIGHT_FLOOR = 1e-12

MIN_SAMPLE_SIZE = 50


@dataclass
class LocalSample:
    """Points with per-point weights, plus the method that produced them."""

    points: np.ndarray   # (m, n_features) float
    weights: np.ndarray  # (m,) positive float
    method: str

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.points.ndim != 2:
            raise ValueError(f"points must be 2-d, got shape {self.points.shape}")
        if self.weights.shape != (self.points.shape[0],):
            raise ValueError(
                f"weights shape {self.weights.shape} does not match {self.points.shape[0]} points"
            )
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def size(self) -> int:
        return self.points.shape[0]


def default_kernel_width(n_features: int) -> float:
    """Scales the proximity kernel with the dimension of the feature space,
    matching the usual square-root growth of Euclidean distances."""
    return 0.75 * float(np.sqrt(n_features))


def generate_local(
    train: Dataset,
    x_q: np.ndarray,
    method: str = "sampled-existing",
    m: int = 1000,
    seed: int = 0,
) -> LocalSample:
    """Draw ``m`` points around ``x_q`` with unit weights.

    ``sampled-existing`` resamples training rows as they are; ``gaussian``
    draws each feature from a normal fit to the training column; ``marginal``
    bootstraps each feature column independently, breaking correlations.
    """
    if method not in SAMPLING_METHODS:
        raise ValueError(f"unknown sampling method {method!r}; expected one of {SAMPLING_METHODS}")
    if m < MIN_SAMPLE_SIZE:
        raise ValueError(f"m must be >= {MIN_SAMPLE_SIZE}, got {m}")
    x_q = np.asarray(x_q, dtype=float).ravel()
    if x_q.shape != (train.n_features,):
        raise ValueError(f"x_q has {x_q.shape[0]} values but the dataset has {train.n_features} features")
    if train.n_instances == 0:
        raise InsufficientData("cannot sample from an empty training set")

    rng = np.random.default_rng(seed)
    if method == "sampled-existing":
        rows = rng.integers(0, train.n_instances, size=m)
        points = train.X[rows].copy()
    elif method == "gaussian":
        mean = train.X.mean(axis=0)
        std = train.X.std(axis=0)
        points = mean + std * rng.standard_normal(size=(m, train.n_features))
    else:  # marginal
        points = np.empty((m, train.n_features), dtype=float)
        for j in range(train.n_features):
            points[:, j] = rng.choice(train.X[:, j], size=m, replace=True)
    return LocalSample(points=points, weights=np.ones(m), method=method)


def append_query_point(sample: LocalSample, x_q: np.ndarray, weight: float = 1.0) -> LocalSample:
    """New sample with ``x_q`` as the last row, guaranteeing the questioned
    point itself is always part of the tree's training data."""
    x_q = np.asarray(x_q, dtype=float).ravel()
    if x_q.shape != (sample.points.shape[1],):
        raise ValueError(f"x_q has {x_q.shape[0]} values but the sample has {sample.points.shape[1]} features")
    return LocalSample(
        points=np.vstack([sample.points, x_q[None, :]]),
        weights=np.append(sample.weights, weight),
        method=sample.method,
    )


def proximity_weights(
    sample: LocalSample,
    x_q: np.ndarray,
    scaler: Scaler,
    kernel_width: float | None = None,
) -> LocalSample:
    """Reweight points by a Gaussian kernel on standardized distance to
    ``x_q``: ``exp(-d**2 / kernel_width**2)``, floored at WEIGHT_FLOOR."""
    x_q = np.asarray(x_q, dtype=float).ravel()
    if kernel_width is None:
        kernel_width = default_kernel_width(sample.points.shape[1])
    if kernel_width <= 0:
        raise ValueError(f"kernel_width must be > 0, got {kernel_width}")
    z = scaler.transform(sample.points)
    z_q = scaler.transform(x_q[None, :])[0]
    d2 = np.sum((z - z_q) ** 2, axis=1)
    weights = np.exp(-d2 / (kernel_width * kernel_width))
    weights = np.maximum(weights, WEIGHT_FLOOR)
    return LocalSample(points=sample.points.copy(), weights=weights, method=sample.method)
