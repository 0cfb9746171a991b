"""Two-spiral benchmark generation, splits, and CSV persistence.

Points are drawn in branch pairs: one radius parameter u per pair gives the
angle theta = 2*pi*turns*sqrt(u) (sqrt for uniform arc density) and radius
r = radius * theta / (2*pi*turns); the second branch is the exact point
reflection of the first.  Gaussian coordinate noise is added independently
per point.  All randomness comes from numpy's seeded PCG64 generator, so
datasets are reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DataError

CSV_HEADER = "x1,x2,label"


@dataclass
class LabeledDataset:
    points: np.ndarray  # (n, 2)
    labels: np.ndarray  # +-1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.labels = np.asarray(self.labels, dtype=float)
        if len(self.points) != len(self.labels):
            raise DataError("points/labels length mismatch")

    def __len__(self) -> int:
        return len(self.labels)


def two_spirals(n: int, turns: float = 1.5, radius: float = 1.0,
                noise_sd: float = 0.02, seed: int = 0) -> LabeledDataset:
    """n interleaved points on two interlocking spirals, labels +-1."""
    if n < 2 or n % 2 != 0:
        raise ConfigurationError(f"n must be even and >= 2, got {n}")
    if turns <= 0 or radius <= 0 or noise_sd < 0:
        raise ConfigurationError(
            f"invalid spiral parameters turns={turns}, radius={radius}, "
            f"noise_sd={noise_sd}")
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, 1.0, size=n // 2)
    u = 1.0 - u  # uniform on (0, 1]
    theta = 2.0 * math.pi * turns * np.sqrt(u)
    r = radius * theta / (2.0 * math.pi * turns)
    base = np.column_stack([r * np.sin(theta), r * np.cos(theta)])
    points = np.empty((n, 2))
    labels = np.empty(n)
    points[0::2] = base
    points[1::2] = -base
    labels[0::2] = 1.0
    labels[1::2] = -1.0
    if noise_sd > 0:
        points += rng.normal(0.0, noise_sd, size=points.shape)
    return LabeledDataset(points, labels, params={
        "n": n, "turns": turns, "radius": radius, "noise_sd": noise_sd,
        "seed": seed})


def split(ds: LabeledDataset, n_train: int, n_test: int,
          seed: int = 0) -> tuple[LabeledDataset, LabeledDataset]:
    """Disjoint seeded train/test split."""
    if n_train + n_test > len(ds):
        raise ConfigurationError(
            f"n_train + n_test = {n_train + n_test} exceeds dataset size "
            f"{len(ds)}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ds))
    tr, te = order[:n_train], order[n_train:n_train + n_test]
    return (LabeledDataset(ds.points[tr], ds.labels[tr], dict(ds.params)),
            LabeledDataset(ds.points[te], ds.labels[te], dict(ds.params)))


def save(ds: LabeledDataset, path) -> None:
    """CSV with 17-significant-digit coordinates (lossless round trip)."""
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for (x1, x2), y in zip(ds.points, ds.labels):
            fh.write(f"{x1:.17g},{x2:.17g},{int(y)}\n")


def load(path) -> LabeledDataset:
    points = []
    labels = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise DataError(f"{path}:1: expected header {CSV_HEADER!r}, "
                            f"got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 fields")
            try:
                points.append((float(parts[0]), float(parts[1])))
                labels.append(float(parts[2]))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return LabeledDataset(np.asarray(points), np.asarray(labels))
