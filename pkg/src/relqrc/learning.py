"""Closed-form ridge readout, accuracy, and empirical kernel spectrum.

Training minimizes the regularized least-squares loss
L(w) = 1/(2 N) sum_i (y_i - w^T X_i)^2 + (l/2) ||w||^2,
whose unique minimizer is w* = (Phi Phi^T + l N 1)^{-1} Phi y with Phi the
matrix holding one feature column per training sample.  The bias row is
regularized together with all other weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigvalsh

from .errors import ConfigurationError, DataError

EIGENVALUE_FLOOR_RATIO = 1e-12  # below this times gamma_max counts as zero


@dataclass
class DesignMatrix:
    """Feature columns Phi (one column per sample) and +-1 labels."""

    phi: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.labels = np.asarray(self.labels, dtype=float)
        if self.phi.ndim != 2 or self.phi.shape[1] != self.labels.shape[0]:
            raise DataError(
                f"need one label per feature column, got {self.phi.shape} "
                f"vs {self.labels.shape}")
        if not np.all(np.isfinite(self.phi)):
            raise DataError("non-finite feature values")

    @classmethod
    def from_rows(cls, features, labels) -> "DesignMatrix":
        """Build from a (samples, features) matrix."""
        return cls(np.asarray(features, dtype=float).T, labels)

    @property
    def n_samples(self) -> int:
        return self.phi.shape[1]


@dataclass
class TrainedModel:
    weights: np.ndarray
    regularization: float
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "weights": list(map(float, self.weights)),
            "regularization": self.regularization,
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TrainedModel":
        doc = json.loads(text)
        return cls(np.asarray(doc["weights"], dtype=float),
                   float(doc["regularization"]), doc.get("metadata", {}))


@dataclass
class KernelSpectrum:
    eigenvalues: np.ndarray  # descending, tiny negatives clamped to zero
    threshold: float

    @property
    def effective_rank(self) -> int:
        return int(np.sum(self.eigenvalues > self.threshold))

    def nonzero(self) -> np.ndarray:
        floor = EIGENVALUE_FLOOR_RATIO * max(self.eigenvalues[0], 0.0)
        return self.eigenvalues[self.eigenvalues > floor]

    def normalized(self) -> np.ndarray:
        """Spectrum rescaled so gamma_max = 1."""
        top = self.eigenvalues[0]
        if top <= 0:
            return self.eigenvalues.copy()
        return self.eigenvalues / top


def ridge_loss(w, phi, y, l) -> float:
    n = phi.shape[1]
    resid = y - phi.T @ w
    return float(0.5 / n * resid @ resid + 0.5 * l * w @ w)


def ridge_gradient(w, phi, y, l) -> np.ndarray:
    n = phi.shape[1]
    return (phi @ (phi.T @ w) - phi @ y) / n + l * w


def train_ridge(design: DesignMatrix, l: float,
                metadata: dict | None = None) -> TrainedModel:
    """Exact SPD solve of (Phi Phi^T + l N 1) w = Phi y via Cholesky."""
    if l <= 0:
        raise ConfigurationError(f"regularization must be positive, got {l}")
    phi, y = design.phi, design.labels
    n = design.n_samples
    gram = phi @ phi.T + l * n * np.eye(phi.shape[0])
    w = cho_solve(cho_factor(gram, lower=True), phi @ y)
    return TrainedModel(weights=w, regularization=l,
                        metadata=dict(metadata or {}))


def predict(model: TrainedModel, features) -> np.ndarray:
    """f_hat = w^T X per row of features (or a single vector)."""
    X = np.asarray(features, dtype=float)
    w = model.weights
    if X.shape[-1] != w.shape[0]:
        raise DataError(
            f"feature dimension {X.shape[-1]} does not match weights "
            f"{w.shape[0]}")
    return X @ w


def classify(model: TrainedModel, features) -> np.ndarray:
    """sign(f_hat) with the tie sign(0) -> +1."""
    f = np.atleast_1d(predict(model, features))
    return np.where(f >= 0.0, 1.0, -1.0)


def accuracy(model: TrainedModel, features, labels) -> float:
    labels = np.asarray(labels, dtype=float)
    if labels.size == 0:
        raise DataError("empty dataset")
    return float(np.mean(classify(model, features) == labels))


def kernel_spectrum(design: DesignMatrix,
                    threshold: float | None = None) -> KernelSpectrum:
    """Descending eigenvalues of Phi Phi^T / N_train.

    The default effective-rank threshold mirrors the regularization used at
    training time; pass it explicitly when no model is involved.
    """
    phi = design.phi
    mat = phi @ phi.T / design.n_samples
    vals = eigvalsh(mat)[::-1]
    if vals[-1] < -1e-10 * max(abs(vals[0]), 1.0):
        raise DataError(f"Gram matrix not PSD: min eigenvalue {vals[-1]}")
    vals = np.clip(vals, 0.0, None)
    return KernelSpectrum(eigenvalues=vals,
                          threshold=1e-6 if threshold is None else threshold)


def kernel(x, x_prime, reservoir_cfg) -> float:
    """k(x, x') = X(x')^T X(x) computed through the live feature map."""
    from .reservoir import features_for
    return float(features_for(x_prime, reservoir_cfg)
                 @ features_for(x, reservoir_cfg))
