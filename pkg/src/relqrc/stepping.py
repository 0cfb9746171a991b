"""Fixed-step RK4 grid construction aligned to segment boundaries.

No integration step ever straddles an acceleration discontinuity or a
measurement time: both are inserted as hard breakpoints, and each resulting
sub-interval gets a step count keyed to the fastest phase rate of the
Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, OutOfRangeError
from .worldline import AccelerationProfile

MIN_STEPS = 16


@dataclass(frozen=True)
class StepConfig:
    """Resolution of the fixed-step classical RK4 integrator."""

    steps_per_period: int = 200

    def __post_init__(self):
        if self.steps_per_period < MIN_STEPS:
            raise ConfigurationError(
                f"steps_per_period must be >= {MIN_STEPS}, "
                f"got {self.steps_per_period}")


@dataclass(frozen=True)
class Interval:
    tau_a: float
    tau_b: float
    n_steps: int
    emit_sample: bool  # snapshot the state after this interval


def build_grid(profile: AccelerationProfile, sample_times, rate: float,
               cfg: StepConfig) -> tuple[list[Interval], bool]:
    """Split [0, total] at segment edges and sample times.

    Returns the interval list and whether a snapshot at tau = 0 was
    requested (a sample time of exactly 0).
    """
    total = profile.total_duration
    tol = 1e-12 * max(1.0, total)
    samples = np.asarray(sample_times, dtype=float)
    if samples.ndim != 1:
        raise ConfigurationError("sample_times must be a 1-d sequence")
    if samples.size and np.any(np.diff(samples) <= 0):
        raise ConfigurationError("sample_times must be strictly increasing")
    if samples.size and (samples[0] < -tol or samples[-1] > total + tol):
        raise OutOfRangeError(
            f"sample times must lie in [0, {total}], got "
            f"[{samples[0]}, {samples[-1]}]")

    breaks = np.sort(np.concatenate([profile.edges, samples]))
    keep = np.concatenate([[True], np.diff(breaks) > tol])
    breaks = breaks[keep]

    def is_sample(tau: float) -> bool:
        return bool(samples.size) and bool(
            np.any(np.abs(samples - tau) <= tol))

    period = 2.0 * math.pi / rate
    intervals = []
    for ta, tb in zip(breaks[:-1], breaks[1:]):
        n = max(MIN_STEPS,
                math.ceil(cfg.steps_per_period * (tb - ta) / period))
        intervals.append(Interval(float(ta), float(tb), n, is_sample(tb)))
    return intervals, is_sample(0.0)
