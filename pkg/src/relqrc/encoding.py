"""Input encoding: affine map to accelerations and the repeated drive schedule.

Each input coordinate is mapped linearly onto a proper-acceleration value in
[a0, a0 + delta_a], and every coordinate contributes a four-piece block
(+a, -a, -a, +a), each piece lasting T/2.  The full block sequence is
repeated m times.  By construction the detector is at rest at every tau = nT
and back at x = 0 at every tau = 2nT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EncodingError
from .worldline import AccelerationProfile

RANGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class EncodingConfig:
    a0: float
    delta_a: float
    T: float
    m: int
    input_ranges: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.a0 > 0:
            raise ConfigurationError(f"a0 must be positive, got {self.a0}")
        if self.delta_a < 0:
            raise ConfigurationError(f"delta_a must be >= 0, got {self.delta_a}")
        if not self.T > 0:
            raise ConfigurationError(f"T must be positive, got {self.T}")
        if self.m < 1:
            raise ConfigurationError(f"m must be a positive integer, got {self.m}")
        for lo, hi in self.input_ranges:
            if not lo < hi:
                raise ConfigurationError(
                    f"degenerate input range ({lo}, {hi}): min must be < max")

    @property
    def n_inputs(self) -> int:
        return len(self.input_ranges)

    def total_duration(self) -> float:
        return 2.0 * self.n_inputs * self.T * self.m


def map_input(x, cfg: EncodingConfig) -> np.ndarray:
    """a_i = a0 + delta_a * (x_i - min_i) / (max_i - min_i)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (cfg.n_inputs,):
        raise EncodingError(
            f"expected {cfg.n_inputs}-dimensional input, got shape {x.shape}")
    out = np.empty_like(x)
    for i, (lo, hi) in enumerate(cfg.input_ranges):
        span = hi - lo
        if x[i] < lo - RANGE_TOLERANCE * max(1.0, abs(lo)) or \
           x[i] > hi + RANGE_TOLERANCE * max(1.0, abs(hi)):
            raise EncodingError(
                f"input coordinate {i} = {x[i]} outside range [{lo}, {hi}]")
        out[i] = cfg.a0 + cfg.delta_a * (x[i] - lo) / span
    return out


def build_profile(a, cfg: EncodingConfig) -> AccelerationProfile:
    """m repetitions of the (+a_i, -a_i, -a_i, +a_i) block per coordinate."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ConfigurationError(f"acceleration values must be positive: {a}")
    half = cfg.T / 2.0
    block = []
    for ai in a:
        block += [(ai, half), (-ai, half), (-ai, half), (ai, half)]
    return AccelerationProfile(tuple(block * cfg.m))


def ranges_from_points(points) -> tuple[tuple[float, float], ...]:
    """Per-dimension (min, max) bounding box of a point set."""
    pts = np.asarray(points, dtype=float)
    return tuple((float(lo), float(hi))
                 for lo, hi in zip(pts.min(axis=0), pts.max(axis=0)))
